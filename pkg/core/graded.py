"""Graded spaces and homogeneous graded maps with sparse exact blocks.

A block of a degree-d map lives at the source degree n and is a
dim(target, n+d) x dim(source, n) ``DomainMatrix`` in sparse format.
Only nonzero blocks are stored; equality is semantic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple

from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from .errors import StructuralError
from .field import Field

Key = Tuple[Tuple[int, int], ...]


def sign(n: int) -> int:
    """(-1)^n for any integer n."""
    return -1 if n % 2 else 1


# ---------- matrix helpers ----------

def dm_from_dok(dok: Mapping[Tuple[int, int], object], shape: Tuple[int, int], field: Field) -> DomainMatrix:
    rows: Dict[int, Dict[int, object]] = {}
    for (i, j), v in dok.items():
        if v != field.zero:
            rows.setdefault(i, {})[j] = v
    return DomainMatrix(rows, shape, field.domain)


def dm_zeros(shape: Tuple[int, int], field: Field) -> DomainMatrix:
    return DomainMatrix({}, shape, field.domain)


def dm_eye(n: int, field: Field) -> DomainMatrix:
    return DomainMatrix({i: {i: field.one} for i in range(n)}, (n, n), field.domain)


def dm_entries(M: DomainMatrix) -> Iterator[Tuple[int, int, object]]:
    for (i, j), v in M.to_sparse().to_dok().items():
        yield i, j, v


def dm_is_zero(M: DomainMatrix) -> bool:
    return M.to_sparse().is_zero_matrix


# ---------- graded spaces ----------

@dataclass(frozen=True)
class GradedSpace:
    """Finitely supported degree -> dimension map.

    ``factors`` is non-empty exactly for flattened tensor products; it fixes the
    basis keys of each degree (see :func:`basis`).
    """

    dims: Tuple[Tuple[int, int], ...]
    factors: Tuple["GradedSpace", ...] = ()

    @classmethod
    def of(cls, dims: Mapping[int, int]) -> "GradedSpace":
        for n, k in dims.items():
            if k < 0:
                raise StructuralError(f"negative dimension {k} in degree {n}")
        return cls(tuple(sorted((int(n), int(k)) for n, k in dims.items() if k > 0)))

    def dim(self, n: int) -> int:
        return self._dims.get(n, 0)

    @property
    def _dims(self) -> Dict[int, int]:
        return _dims_dict(self)

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(n for n, _ in self.dims)

    @property
    def total_dim(self) -> int:
        return sum(k for _, k in self.dims)

    @property
    def is_zero(self) -> bool:
        return not self.dims

    @property
    def flat_factors(self) -> Tuple["GradedSpace", ...]:
        return self.factors if self.factors else (self,)

    def degree_range(self) -> Optional[Tuple[int, int]]:
        if not self.dims:
            return None
        return self.dims[0][0], self.dims[-1][0]

    def shifted(self, n: int) -> "GradedSpace":
        """E[n]^m = E^{m+n}. Basis order inside each degree is kept; factor structure is dropped."""
        return GradedSpace(tuple((m - n, k) for m, k in self.dims))

    def __str__(self) -> str:
        body = ", ".join(f"{n}:{k}" for n, k in self.dims)
        if self.factors:
            return f"<{len(self.factors)}-fold tensor {{{body}}}>"
        return f"{{{body}}}"


@lru_cache(maxsize=None)
def _dims_dict(space: GradedSpace) -> Dict[int, int]:
    return dict(space.dims)


ZERO_SPACE = GradedSpace(())


def tensor_spaces(*spaces: GradedSpace) -> GradedSpace:
    """Flattened tensor product; tensor_spaces(tensor_spaces(E, F), G) == tensor_spaces(E, F, G)."""
    flat = tuple(itertools.chain.from_iterable(s.flat_factors for s in spaces))
    if len(flat) == 1:
        return flat[0]
    dims: Dict[int, int] = {0: 1}
    for s in flat:
        nxt: Dict[int, int] = {}
        for a, ka in dims.items():
            for b, kb in s.dims:
                nxt[a + b] = nxt.get(a + b, 0) + ka * kb
        dims = nxt
    return GradedSpace(tuple(sorted((n, k) for n, k in dims.items() if k > 0)), flat)


@lru_cache(maxsize=None)
def basis(space: GradedSpace, n: int) -> Tuple[Key, ...]:
    """Basis keys of degree n: one (degree, index) pair per flat factor, sorted lexicographically."""
    if not space.factors:
        return tuple(((n, i),) for i in range(space.dim(n)))
    out = []
    for degs in _degree_splits(space.factors, n):
        ranges = [range(f.dim(d)) for f, d in zip(space.factors, degs)]
        for idx in itertools.product(*ranges):
            out.append(tuple(zip(degs, idx)))
    out.sort()
    return tuple(out)


@lru_cache(maxsize=None)
def positions(space: GradedSpace, n: int) -> Dict[Key, int]:
    return {k: i for i, k in enumerate(basis(space, n))}


def _degree_splits(factors: Tuple[GradedSpace, ...], n: int) -> Iterator[Tuple[int, ...]]:
    if len(factors) == 1:
        if factors[0].dim(n):
            yield (n,)
        return
    head, rest = factors[0], factors[1:]
    for d in head.degrees:
        for tail in _degree_splits(rest, n - d):
            yield (d,) + tail


def key_degree(key: Key) -> int:
    return sum(d for d, _ in key)


# ---------- graded maps ----------

@dataclass(frozen=True, eq=False)
class GradedMap:
    source: GradedSpace
    target: GradedSpace
    degree: int
    blocks: Mapping[int, DomainMatrix]
    field: Field

    def block(self, n: int) -> DomainMatrix:
        M = self.blocks.get(n)
        if M is not None:
            return M
        return dm_zeros((self.target.dim(n + self.degree), self.source.dim(n)), self.field)

    @property
    def is_zero(self) -> bool:
        return not self.blocks

    def nonzero_entries(self) -> Iterator[Tuple[int, int, int, object]]:
        """(source degree, row, column, value) over stored entries."""
        for n in sorted(self.blocks):
            for i, j, v in dm_entries(self.blocks[n]):
                yield n, i, j, v

    def __add__(self, other: "GradedMap") -> "GradedMap":
        return gmap_add(self, other)

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        return gmap_add(self, gmap_scale(-1, other))

    def __neg__(self) -> "GradedMap":
        return gmap_scale(-1, self)

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        return gmap_compose(self, other)

    def __repr__(self) -> str:
        return f"GradedMap(deg={self.degree}, {self.source} -> {self.target}, blocks={sorted(self.blocks)})"


def gmap(source: GradedSpace, target: GradedSpace, degree: int,
         blocks: Mapping[int, DomainMatrix], field: Field) -> GradedMap:
    """Validate shapes, drop zero blocks and build the map."""
    kept: Dict[int, DomainMatrix] = {}
    for n, M in blocks.items():
        expected = (target.dim(n + degree), source.dim(n))
        if M.shape != expected:
            raise StructuralError(
                f"block at source degree {n} has shape {M.shape}, expected {expected}"
            )
        if M.domain != field.domain:
            raise StructuralError(f"block at source degree {n} is over {M.domain}, expected {field}")
        if expected[0] and expected[1] and not dm_is_zero(M):
            kept[n] = M.to_sparse()
    return GradedMap(source, target, degree, kept, field)


def gmap_zero(source: GradedSpace, target: GradedSpace, degree: int, field: Field) -> GradedMap:
    return GradedMap(source, target, degree, {}, field)


def gmap_identity(space: GradedSpace, field: Field) -> GradedMap:
    return GradedMap(space, space, 0, {n: dm_eye(k, field) for n, k in space.dims}, field)


def gmap_from_entries(source: GradedSpace, target: GradedSpace, degree: int,
                      entries: Mapping[int, Mapping[Tuple[int, int], object]], field: Field) -> GradedMap:
    """Build from {source degree: {(row, col): value}}."""
    blocks = {
        n: dm_from_dok(dok, (target.dim(n + degree), source.dim(n)), field)
        for n, dok in entries.items()
        if source.dim(n) and target.dim(n + degree)
    }
    return gmap(source, target, degree, blocks, field)


def gmap_compose(g: GradedMap, f: GradedMap) -> GradedMap:
    """g after f."""
    if f.target != g.source:
        raise StructuralError(
            f"cannot compose: target {f.target} of the inner map differs from source {g.source}"
        )
    blocks = {}
    for n, F in f.blocks.items():
        G = g.blocks.get(n + f.degree)
        if G is not None:
            blocks[n] = G * F
    return gmap(f.source, g.target, f.degree + g.degree, blocks, f.field)


def gmap_add(f: GradedMap, g: GradedMap) -> GradedMap:
    if f.degree != g.degree:
        raise StructuralError(f"cannot add maps of degrees {f.degree} and {g.degree}")
    if f.source != g.source or f.target != g.target:
        raise StructuralError("cannot add maps between different spaces")
    blocks = dict(f.blocks)
    for n, G in g.blocks.items():
        blocks[n] = blocks[n] + G if n in blocks else G
    return gmap(f.source, f.target, f.degree, blocks, f.field)


def gmap_sum(maps: Iterable[GradedMap], source: GradedSpace, target: GradedSpace,
             degree: int, field: Field) -> GradedMap:
    total = gmap_zero(source, target, degree, field)
    for m in maps:
        total = gmap_add(total, m)
    return total


def gmap_scale(c, f: GradedMap) -> GradedMap:
    c = f.field(c) if isinstance(c, int) else c
    if c == f.field.zero:
        return gmap_zero(f.source, f.target, f.degree, f.field)
    if c == f.field.one:
        return f
    return gmap(f.source, f.target, f.degree, {n: M * c for n, M in f.blocks.items()}, f.field)


def gmap_equal(f: GradedMap, g: GradedMap) -> bool:
    if f.degree != g.degree or f.source != g.source or f.target != g.target:
        return False
    for n in set(f.blocks) | set(g.blocks):
        if not dm_is_zero(f.block(n) - g.block(n)):
            return False
    return True


def gmap_support(f: GradedMap) -> Tuple[int, ...]:
    """Source degrees carrying nonzero blocks."""
    return tuple(sorted(f.blocks))



def gmap_inverse(f: GradedMap) -> GradedMap:
    """Inverse of a degree-0 isomorphism, degree by degree."""
    if f.degree != 0:
        raise StructuralError("only degree 0 maps can be inverted")
    blocks = {}
    for n, k in f.source.dims:
        if f.target.dim(n) != k:
            raise StructuralError(f"map is not square in degree {n}")
        M = f.block(n).to_dense()
        try:
            blocks[n] = M.inv().to_sparse()
        except DMNonInvertibleMatrixError:
            raise StructuralError(f"map is singular in degree {n}") from None
    return gmap(f.target, f.source, 0, blocks, f.field)

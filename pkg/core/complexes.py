"""Complexes and the closed monoidal DG category Ch built from them.

Shifts follow the psi convention: E[n]^m = E^{m+n} and the matrices of every
map are left untouched. Any compensating sign lives in the twisted formulas,
or in :func:`suspend` where a natural differential is wanted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import PreconditionError, StructuralError
from .field import Field
from .graded import (
    GradedMap,
    GradedSpace,
    Key,
    basis,
    dm_entries,
    dm_from_dok,
    gmap,
    gmap_add,
    gmap_compose,
    gmap_equal,
    gmap_from_entries,
    gmap_identity,
    gmap_scale,
    gmap_zero,
    key_degree,
    positions,
    sign,
    tensor_spaces,
)
from .linalg import column, rank, solve


@dataclass(frozen=True, eq=False)
class Complex:
    space: GradedSpace
    d: GradedMap
    factors: Tuple["Complex", ...] = ()

    @property
    def field(self) -> Field:
        return self.d.field

    @property
    def flat_factors(self) -> Tuple["Complex", ...]:
        return self.factors if self.factors else (self,)

    @property
    def identity(self) -> GradedMap:
        return gmap_identity(self.space, self.field)

    def __repr__(self) -> str:
        return f"Complex({self.space})"


def make_complex(space: GradedSpace, d: GradedMap, factors: Tuple[Complex, ...] = ()) -> Complex:
    if d.degree != 1:
        raise StructuralError(f"differential has degree {d.degree}, expected 1")
    if d.source != space or d.target != space:
        raise StructuralError("differential is not an endomorphism of the declared space")
    dd = gmap_compose(d, d)
    if not dd.is_zero:
        raise PreconditionError("d o d is nonzero", residual=dd,
                                witness={"degrees": sorted(dd.blocks)})
    return Complex(space, d, factors)


def zero_differential(space: GradedSpace, field: Field) -> Complex:
    return Complex(space, gmap_zero(space, space, 1, field))


def unit_complex(field: Field) -> Complex:
    """k in degree 0."""
    return zero_differential(GradedSpace.of({0: 1}), field)


def complex_equal(E: Complex, F: Complex) -> bool:
    return E.space == F.space and gmap_equal(E.d, F.d)


def atomic(E: Complex) -> Complex:
    """Forget tensor-factor structure, keeping positions inside each degree."""
    if not E.space.factors:
        return Complex(E.space, E.d)
    space = GradedSpace(E.space.dims)
    return Complex(space, gmap(space, space, 1, E.d.blocks, E.field))


# ---------- hom complexes ----------

def hom_diff(f: GradedMap, E: Complex, F: Complex) -> GradedMap:
    """d(f) = d_F f - (-1)^{|f|} f d_E."""
    if f.source != E.space or f.target != F.space:
        raise StructuralError("map does not run between the given complexes")
    return gmap_add(gmap_compose(F.d, f), gmap_scale(-sign(f.degree), gmap_compose(f, E.d)))


@dataclass(frozen=True, eq=False)
class HomComplex:
    """hom(E, F) with an explicit basis: source degrees ascending, entries row-major."""

    source: Complex
    target: Complex
    complex: Complex
    _layout: Dict[int, List[Tuple[int, int]]] = dc_field(repr=False)

    def encode(self, f: GradedMap):
        n = f.degree
        vec = {}
        offset = 0
        for m, size in self._layout.get(n, []):
            if m in f.blocks:
                for i, j, v in dm_entries(f.blocks[m]):
                    vec[offset + i * self.source.space.dim(m) + j] = v
            offset += size
        return column(vec, self.complex.space.dim(n), self.source.field)

    def decode(self, n: int, vec) -> GradedMap:
        entries: Dict[int, Dict[Tuple[int, int], object]] = {}
        starts = []
        offset = 0
        for m, size in self._layout.get(n, []):
            starts.append((offset, m))
            offset += size
        for pos, _, v in dm_entries(vec):
            for start, m in reversed(starts):
                if pos >= start:
                    cols = self.source.space.dim(m)
                    k = pos - start
                    entries.setdefault(m, {})[(k // cols, k % cols)] = v
                    break
        return gmap_from_entries(self.source.space, self.target.space, n, entries, self.source.field)

    def basis_map(self, n: int, index: int) -> GradedMap:
        return self.decode(n, column({index: self.source.field.one}, self.complex.space.dim(n), self.source.field))


def hom_complex(E: Complex, F: Complex) -> HomComplex:
    field = E.field
    layout: Dict[int, List[Tuple[int, int]]] = {}
    for m in E.space.degrees:
        for p in F.space.degrees:
            layout.setdefault(p - m, []).append((m, F.space.dim(p) * E.space.dim(m)))
    for n in layout:
        layout[n].sort()
    dims = {n: sum(s for _, s in parts) for n, parts in layout.items()}
    space = GradedSpace.of(dims)
    skeleton = HomComplex(E, F, zero_differential(space, field), layout)
    entries: Dict[int, Dict[Tuple[int, int], object]] = {}
    for n in space.degrees:
        if not space.dim(n + 1):
            continue
        for idx in range(space.dim(n)):
            image = skeleton.encode(hom_diff(skeleton.basis_map(n, idx), E, F))
            for i, _, v in dm_entries(image):
                entries.setdefault(n, {})[(i, idx)] = v
    d = gmap_from_entries(space, space, 1, entries, field)
    return HomComplex(E, F, Complex(space, d), layout)


def solve_boundary(E: Complex, F: Complex, y: GradedMap) -> Optional[GradedMap]:
    """Some x with hom_diff(x) = y, or None when y is not a boundary."""
    H = hom_complex(E, F)
    n = y.degree
    target = H.encode(y)
    if H.complex.space.dim(n - 1) == 0:
        return gmap_zero(E.space, F.space, n - 1, E.field) if y.is_zero else None
    x = solve(H.complex.d.block(n - 1), target, E.field)
    if x is None:
        return None
    return H.decode(n - 1, x)


def homology_dims(C: Complex) -> Dict[int, int]:
    out = {}
    for n, k in C.space.dims:
        h = k - rank(C.d.block(n)) - rank(C.d.block(n - 1))
        if h:
            out[n] = h
    return out


# ---------- tensor products ----------

def _columns(f: GradedMap) -> Dict[Key, List[Tuple[Key, object]]]:
    cols: Dict[Key, List[Tuple[Key, object]]] = {}
    for n, i, j, v in f.nonzero_entries():
        src = basis(f.source, n)[j]
        tgt = basis(f.target, n + f.degree)[i]
        cols.setdefault(src, []).append((tgt, v))
    return cols


def tensor_map(*maps: GradedMap) -> GradedMap:
    """f_1 x ... x f_k with the Koszul rule (f x g)(x y) = (-1)^{|g||x|} f(x) g(y)."""
    if not maps:
        raise StructuralError("tensor_map needs at least one map")
    field = maps[0].field
    if len(maps) == 1:
        return maps[0]
    source = tensor_spaces(*(f.source for f in maps))
    target = tensor_spaces(*(f.target for f in maps))
    degree = sum(f.degree for f in maps)
    widths = [len(f.source.flat_factors) for f in maps]
    cols = [_columns(f) for f in maps]
    entries: Dict[int, Dict[Tuple[int, int], object]] = {}
    for n in source.degrees:
        if not target.dim(n + degree):
            continue
        tpos = positions(target, n + degree)
        for j, key in enumerate(basis(source, n)):
            parts = []
            start = 0
            for w in widths:
                parts.append(key[start:start + w])
                start += w
            options = []
            for c, part in zip(cols, parts):
                opt = c.get(part)
                if not opt:
                    break
                options.append(opt)
            else:
                eps = 0
                seen = 0
                for f, part in zip(maps, parts):
                    eps += f.degree * seen
                    seen += key_degree(part)
                base_sign = sign(eps)
                block = entries.setdefault(n, {})
                for combo in itertools.product(*options):
                    tkey = tuple(itertools.chain.from_iterable(t for t, _ in combo))
                    value = field.one if base_sign > 0 else -field.one
                    for _, v in combo:
                        value = value * v
                    row = tpos[tkey]
                    block[(row, j)] = block.get((row, j), field.zero) + value
    return gmap_from_entries(source, target, degree, entries, field)


def tensor(*complexes: Complex) -> Complex:
    """Flattened tensor product with d = sum of id x .. x d_a x .. x id."""
    flat = tuple(itertools.chain.from_iterable(C.flat_factors for C in complexes))
    if len(flat) == 1:
        return flat[0]
    field = flat[0].field
    space = tensor_spaces(*(C.space for C in flat))
    d = gmap_zero(space, space, 1, field)
    ids = [C.identity for C in flat]
    for a, C in enumerate(flat):
        if C.d.is_zero:
            continue
        d = gmap_add(d, tensor_map(*(ids[:a] + [C.d] + ids[a + 1:])))
    return Complex(space, d, flat)


def tensor_power(A: Complex, n: int) -> Complex:
    if n < 1:
        raise StructuralError("tensor powers start at 1")
    return tensor(*([A] * n))


def unitor(E: Complex) -> GradedMap:
    """The canonical isomorphism E x k -> E."""
    ExK = tensor(E, unit_complex(E.field))
    return gmap(ExK.space, E.space, 0, gmap_identity(E.space, E.field).blocks, E.field)


# ---------- shifts, sums, perturbation ----------

def shift(E: Complex, n: int) -> Complex:
    """E[n]^m = E^{m+n}, same matrices."""
    return Complex(E.space.shifted(n), shift_map(E.d, n, n))


def suspend(E: Complex, n: int) -> Complex:
    """shift(E, n) carrying the natural differential (-1)^n d."""
    S = shift(E, n)
    return Complex(S.space, gmap_scale(sign(n), S.d))


def shift_map(f: GradedMap, s: int, t: int) -> GradedMap:
    """f: E -> F regarded as E[s] -> F[t]; degree becomes |f| - t + s."""
    return gmap(f.source.shifted(s), f.target.shifted(t), f.degree - t + s,
                {n - s: M for n, M in f.blocks.items()}, f.field)


@dataclass(frozen=True, eq=False)
class DirectSum:
    complex: Complex
    summands: Tuple[Complex, ...]
    offsets: Dict[Tuple[int, int], int]

    def inclusion(self, k: int) -> GradedMap:
        S = self.summands[k]
        return _placement(S.space, self.complex.space, self.offsets, k, S.field, into=True)

    def projection(self, k: int) -> GradedMap:
        S = self.summands[k]
        return _placement(S.space, self.complex.space, self.offsets, k, S.field, into=False)

    def embed(self, f: GradedMap, src: int, tgt: int) -> GradedMap:
        """A map between summands as an endomorphism-degree map of the sum."""
        blocks: Dict[int, Dict[Tuple[int, int], object]] = {}
        for n, i, j, v in f.nonzero_entries():
            r = self.offsets[(tgt, n + f.degree)] + i
            c = self.offsets[(src, n)] + j
            blocks.setdefault(n, {})[(r, c)] = v
        total = self.complex.space
        return gmap_from_entries(total, total, f.degree, blocks, f.field)

    def block(self, F: GradedMap, src: int, tgt: int) -> GradedMap:
        """The (src, tgt) block of an endomorphism-degree map of the sum."""
        S, T = self.summands[src].space, self.summands[tgt].space
        entries: Dict[int, Dict[Tuple[int, int], object]] = {}
        for n, i, j, v in F.nonzero_entries():
            if not S.dim(n) or not T.dim(n + F.degree):
                continue
            c = j - self.offsets[(src, n)]
            r = i - self.offsets[(tgt, n + F.degree)]
            if 0 <= c < S.dim(n) and 0 <= r < T.dim(n + F.degree):
                entries.setdefault(n, {})[(r, c)] = v
        return gmap_from_entries(S, T, F.degree, entries, F.field)


def _placement(part: GradedSpace, total: GradedSpace, offsets, k, field, *, into: bool) -> GradedMap:
    blocks = {}
    for n, size in part.dims:
        off = offsets[(k, n)]
        dok = {(off + i, i) if into else (i, off + i): field.one for i in range(size)}
        shape = (total.dim(n), size) if into else (size, total.dim(n))
        blocks[n] = dm_from_dok(dok, shape, field)
    if into:
        return gmap(part, total, 0, blocks, field)
    return gmap(total, part, 0, blocks, field)


def direct_sum(complexes: Sequence[Complex], field: Optional[Field] = None) -> DirectSum:
    if not complexes and field is None:
        raise StructuralError("empty direct sum needs an explicit field")
    field = field or complexes[0].field
    offsets: Dict[Tuple[int, int], int] = {}
    dims: Dict[int, int] = {}
    for k, C in enumerate(complexes):
        for n, size in C.space.dims:
            offsets[(k, n)] = dims.get(n, 0)
            dims[n] = dims.get(n, 0) + size
    space = GradedSpace.of(dims)
    skeleton = DirectSum(zero_differential(space, field), tuple(complexes), offsets)
    d = gmap_zero(space, space, 1, field)
    for k, C in enumerate(complexes):
        d = gmap_add(d, skeleton.embed(C.d, k, k))
    return DirectSum(Complex(space, d), tuple(complexes), offsets)


def truncate_degrees(E: Complex, lo: Optional[int], hi: Optional[int]) -> Complex:
    """Brutal truncation to degrees lo..hi (None = unbounded on that side)."""
    def keep(n: int) -> bool:
        return (lo is None or n >= lo) and (hi is None or n <= hi)

    space = GradedSpace.of({n: k for n, k in E.space.dims if keep(n)})
    blocks = {n: M for n, M in E.d.blocks.items() if keep(n) and keep(n + 1)}
    return Complex(space, gmap(space, space, 1, blocks, E.field))


def mc_residual(E: Complex, f: GradedMap) -> GradedMap:
    """d(f) + f o f."""
    return gmap_add(hom_diff(f, E, E), gmap_compose(f, f))


def perturb(E: Complex, f: GradedMap) -> Complex:
    """Change of differential d -> d + f for a Maurer-Cartan element f.

    A zero f returns E itself; otherwise the result is flattened (see :func:`atomic`),
    since d + f no longer respects the tensor factors.
    """
    if f.degree != 1 or f.source != E.space or f.target != E.space:
        raise StructuralError("perturbation must be a degree 1 endomorphism")
    residual = mc_residual(E, f)
    if not residual.is_zero:
        raise PreconditionError("perturbation is not Maurer-Cartan: d(f) + f o f != 0",
                                residual=residual, witness={"degrees": sorted(residual.blocks)})
    if f.is_zero:
        return E
    base = atomic(E)
    d = gmap_add(base.d, gmap(base.space, base.space, 1, f.blocks, f.field))
    return make_complex(base.space, d)

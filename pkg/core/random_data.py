"""Random valid inputs for the property suites and ``selftest``.

Validity is by construction: a differential, or the natural differential of
a direct sum, is conjugated by a degree 0 automorphism, and the twisting
data is read off as the difference. Block-unipotent automorphisms keep the
result one-sided in whichever direction the caller asks for.
"""

from __future__ import annotations

import random
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .ainfty import AInfAlgebra
from .bitwisted import TwistedBicomplex, cxrow_inverse
from .categories import ChCategory
from .complexes import (
    Complex,
    DirectSum,
    direct_sum,
    hom_diff,
    shift_map,
    solve_boundary,
    suspend,
    tensor,
    tensor_map,
    tensor_power,
    zero_differential,
)
from .errors import PreconditionError
from .field import Field
from .graded import (
    GradedMap,
    GradedSpace,
    gmap_add,
    gmap_compose,
    gmap_from_entries,
    gmap_identity,
    gmap_inverse,
    gmap_scale,
    positions,
)
from .modules import RIGHT, AInfModule, ModMorphism, NodCategory, mod_add, mod_diff, mod_identity, mod_scale
from .quiver import quiver_of_complexes
from .retract import RetractData, homology_retract
from .twisted import TwistedBase, TwistedComplex, TwistedMorphism, twisted_residual

MODES = ("one_sided", "general")
BI_MODES = ("vertical", "horizontal", "general")


def rng_for(seed: int) -> random.Random:
    return random.Random(seed)


def random_gmap(source: GradedSpace, target: GradedSpace, degree: int, field: Field,
                rng: random.Random, density: float = 0.5) -> GradedMap:
    entries: Dict[int, Dict[Tuple[int, int], Any]] = {}
    for n, cols in source.dims:
        rows = target.dim(n + degree)
        for r in range(rows):
            for c in range(cols):
                if rng.random() < density:
                    entries.setdefault(n, {})[(r, c)] = field.random(rng, nonzero=True)
    return gmap_from_entries(source, target, degree, entries, field)


def _triangular(space: GradedSpace, field: Field, rng: random.Random, lower: bool, density: float) -> GradedMap:
    entries: Dict[int, Dict[Tuple[int, int], Any]] = {}
    for n, k in space.dims:
        dok = entries.setdefault(n, {})
        for i in range(k):
            dok[(i, i)] = field.one
            for j in range(k):
                if (j < i if lower else j > i) and rng.random() < density:
                    dok[(i, j)] = field.random(rng, nonzero=True)
    return gmap_from_entries(space, space, 0, entries, field)


def random_automorphism(space: GradedSpace, field: Field, rng: random.Random,
                        density: float = 0.5) -> Tuple[GradedMap, GradedMap]:
    """(U, U^-1) with U = (I + L)(I + R) in every degree."""
    U = gmap_compose(_triangular(space, field, rng, True, density), _triangular(space, field, rng, False, density))
    return U, gmap_inverse(U)


def random_complex(field: Field, rng: random.Random, lo: int = -1, hi: int = 1, max_dim: int = 3) -> Complex:
    """A standard differential (pairs x -> y, plus homology) conjugated by a random automorphism."""
    dims = {n: rng.randint(0, max_dim) for n in range(lo, hi + 1)}
    if not any(dims.values()):
        dims[rng.randint(lo, hi)] = 1
    entries: Dict[int, Dict[Tuple[int, int], Any]] = {}
    used = 0
    for n in range(lo, hi + 1):
        r = rng.randint(0, max(0, min(dims[n] - used, dims.get(n + 1, 0))))
        for k in range(r):
            entries.setdefault(n, {})[(k, used + k)] = field.one
        used = r
    space = GradedSpace.of(dims)
    d0 = gmap_from_entries(space, space, 1, entries, field)
    U, Uinv = random_automorphism(space, field, rng)
    return Complex(space, gmap_compose(U, gmap_compose(d0, Uinv)))


# ---------- twisted data by conjugation ----------

def _block_unipotent(ds: DirectSum, pairs: Sequence[Tuple[int, int]], field: Field,
                     rng: random.Random, density: float) -> GradedMap:
    """I plus random degree 0 blocks from summand s to summand t for each (s, t) in ``pairs``."""
    total = gmap_identity(ds.complex.space, field)
    for s, t in pairs:
        blk = random_gmap(ds.summands[s].space, ds.summands[t].space, 0, field, rng, density)
        if not blk.is_zero:
            total = gmap_add(total, ds.embed(blk, s, t))
    return total


def _twist(cells: Sequence[Any], objects: Dict[Any, Complex], weight: Callable[[Any], int],
           forward: Callable[[Any, Any], bool], general: bool, field: Field,
           rng: random.Random, density: float) -> Dict[Tuple[Any, Any], GradedMap]:
    """Arrows alpha_st making the objects a twisted complex, read off U d U^-1 - d."""
    ds = direct_sum([suspend(objects[c], -weight(c)) for c in cells], field)
    fwd = [(a, b) for a, ca in enumerate(cells) for b, cb in enumerate(cells) if forward(ca, cb)]
    U = _block_unipotent(ds, fwd, field, rng, density)
    if general:
        U = gmap_compose(_block_unipotent(ds, [(b, a) for a, b in fwd], field, rng, density), U)
    D = ds.complex.d
    F = gmap_add(gmap_compose(U, gmap_compose(D, gmap_inverse(U))), gmap_scale(-1, D))
    arrows = {}
    for a, ca in enumerate(cells):
        for b, cb in enumerate(cells):
            blk = ds.block(F, a, b)
            if not blk.is_zero:
                arrows[(ca, cb)] = shift_map(blk, weight(ca), weight(cb))
    return arrows


def random_twisted(field: Field, rng: random.Random, lo: int = 0, hi: int = 2, *,
                   mode: str = "one_sided", max_dim: int = 2, degrees: Tuple[int, int] = (-1, 1),
                   density: float = 0.5) -> TwistedComplex:
    """A bounded twisted complex over Ch on [lo, hi]."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    cells = list(range(lo, hi + 1))
    objects = {i: random_complex(field, rng, degrees[0], degrees[1], max_dim) for i in cells}
    arrows = _twist(cells, objects, lambda i: i, lambda i, j: j > i, mode == "general", field, rng, density)
    return TwistedComplex.bounded(ChCategory(field), objects, arrows)


def random_bicomplex(field: Field, rng: random.Random, rows: Tuple[int, int] = (0, 1),
                     cols: Tuple[int, int] = (0, 1), *, mode: str = "vertical", max_dim: int = 2,
                     degrees: Tuple[int, int] = (-1, 1), density: float = 0.5) -> TwistedBicomplex:
    if mode not in BI_MODES:
        raise ValueError(f"mode must be one of {BI_MODES}")
    cells = [(i, j) for i in range(rows[0], rows[1] + 1) for j in range(cols[0], cols[1] + 1)]
    objects = {c: random_complex(field, rng, degrees[0], degrees[1], max_dim) for c in cells}
    if mode == "horizontal":
        def forward(s, t):
            return (t[1], t[0]) > (s[1], s[0])
    else:
        def forward(s, t):
            return t > s
    arrows = _twist(cells, objects, lambda c: c[0] + c[1], forward, mode == "general", field, rng, density)
    return TwistedBicomplex.bounded(ChCategory(field), objects, arrows)


def random_complex_of_complexes(field: Field, rng: random.Random, rows: Tuple[int, int] = (0, 1),
                                cols: Tuple[int, int] = (0, 1), **kw) -> TwistedComplex:
    """Rows of a random vertically one-sided bicomplex."""
    return cxrow_inverse(random_bicomplex(field, rng, rows, cols, mode="vertical", **kw))


def random_morphism(source: TwistedBase, target: TwistedBase, degree: int, rng: random.Random,
                    density: float = 0.4) -> TwistedMorphism:
    field = source.category.field
    comps = {}
    for i in source.cells():
        for j in target.cells():
            deg = degree + source.weight(i) - target.weight(j)
            f = random_gmap(source.obj(i).space, target.obj(j).space, deg, field, rng, density)
            if not f.is_zero:
                comps[(i, j)] = f
    return TwistedMorphism.bounded(source, target, degree, comps)


# ---------- algebras and modules ----------

def upper_triangular_algebra(field: Field, n: int = 2, bound: int = 2) -> AInfAlgebra:
    """Upper triangular n x n matrices in degree 0, basis e_ab (a <= b) in lexicographic order."""
    units = [(a, b) for a in range(n) for b in range(a, n)]
    index = {u: k for k, u in enumerate(units)}
    A = zero_differential(GradedSpace.of({0: len(units)}), field)
    AA = tensor_power(A, 2)
    pos = positions(AA.space, 0)
    entries = {}
    for x, (a, b) in enumerate(units):
        for y, (c, d) in enumerate(units):
            if b == c:
                entries[(index[(a, d)], pos[((0, x), (0, y))])] = field.one
    m2 = gmap_from_entries(AA.space, A.space, 0, {0: entries}, field)
    return AInfAlgebra(A, {2: m2}, bound, name="upper_triangular")


def endomorphism_algebra(C: Complex) -> AInfAlgebra:
    """hom(C, C) with composition as m_2."""
    Q = quiver_of_complexes({"C": C})
    return AInfAlgebra(Q.hom("C", "C"), {2: Q.comp[("C", "C", "C")]}, 2, name="end")


def compensate_algebra(A: Complex, m: Dict[int, GradedMap], bound: int) -> AInfAlgebra:
    """Solve for m_3 .. m_bound one arity at a time so the bar relations hold on words of length <= bound."""
    ops = dict(m)
    for i in range(3, bound + 1):
        ops.pop(i, None)
        rest = twisted_residual(AInfAlgebra(A, ops, bound).bar, 1 - i, 0)
        if rest is None:
            continue
        x = solve_boundary(tensor_power(A, i), A, gmap_scale(-1, rest))
        if x is None:
            raise PreconditionError(f"no m_{i} compensates the lower operations", residual=rest)
        ops[i] = x
    return AInfAlgebra(A, ops, bound)


def compensated_algebra(field: Field, rng: random.Random, bound: int = 4, attempts: int = 20) -> AInfAlgebra:
    """A non-associative m_2 on an acyclic A, completed by solved higher operations.

    m_2 is a random product mu made closed by subtracting a solution z of
    d(z) = d(mu); draws whose associator vanishes are rejected. Hom complexes
    out of tensor powers of an acyclic complex are acyclic, so z and every
    compensating operation exist.
    """
    dims = {0: 2, 1: 2}
    space = GradedSpace.of(dims)
    d = gmap_from_entries(space, space, 1, {0: {(k, k): field.one for k in range(dims[0])}}, field)
    U, Uinv = random_automorphism(space, field, rng)
    A = Complex(space, gmap_compose(U, gmap_compose(d, Uinv)))
    AA = tensor_power(A, 2)
    for _ in range(attempts):
        mu = random_gmap(AA.space, A.space, 0, field, rng, 0.8)
        z = solve_boundary(AA, A, hom_diff(mu, AA, A))
        if z is None:
            continue
        m2 = gmap_add(mu, gmap_scale(-1, z))
        if twisted_residual(AInfAlgebra(A, {2: m2}, 2).bar, -2, 0) is not None:
            return compensate_algebra(A, {2: m2}, bound)
    raise PreconditionError(f"no non-associative product found in {attempts} draws")


def free_module(algebra: AInfAlgebra, V: Optional[Complex] = None, name: Optional[str] = None) -> AInfModule:
    """V x A as a right module with p_k = id_V x m_k; V = None gives A itself."""
    A = algebra.A
    if V is None:
        p = {i: op for i, op in algebra.m.items()}
        return AInfModule(A, algebra, p, algebra.bound, RIGHT, name=name)
    E = tensor(V, A)
    p = {i: tensor_map(V.identity, op) for i, op in algebra.m.items()}
    return AInfModule(E, algebra, p, algebra.bound, RIGHT, name=name)


def random_mod_morphism(source: AInfModule, target: AInfModule, degree: int, bound: int,
                        rng: random.Random, density: float = 0.4) -> ModMorphism:
    comps = {}
    for i in range(1, bound + 1):
        f = random_gmap(source.word(i - 1).space, target.E.space, degree - i + 1, source.field, rng, density)
        if not f.is_zero:
            comps[i] = f
    return ModMorphism(source, target, degree, comps, bound)


def random_closed_morphism(source: AInfModule, target: AInfModule, rng: random.Random,
                           bound: int = 2) -> ModMorphism:
    """c id (when source is target) plus the differential of a random degree -1 morphism."""
    H = random_mod_morphism(source, target, -1, bound, rng)
    closed = mod_diff(H)
    if source is target:
        closed = mod_add(closed, mod_scale(source.field.random(rng, nonzero=True), mod_identity(source)))
    return closed


def random_module_complex(algebra: AInfAlgebra, rng: random.Random, max_dim: int = 2,
                          same: Optional[bool] = None) -> TwistedComplex:
    """A two-term one-sided twisted complex of free right modules: E_0 -> E_1 by a closed degree 0 morphism."""
    field = algebra.field
    same = rng.random() < 0.5 if same is None else same
    E0 = free_module(algebra, random_complex(field, rng, -1, 0, max_dim), name="E0")
    E1 = E0 if same else free_module(algebra, random_complex(field, rng, -1, 0, max_dim), name="E1")
    alpha = random_closed_morphism(E0, E1, rng)
    arrows = {(0, 1): alpha} if alpha.f else {}
    return TwistedComplex.bounded(NodCategory(algebra), {0: E0, 1: E1}, arrows)


def random_transfer_problem(field: Field, rng: random.Random, max_dim: int = 1) -> Tuple[AInfModule, RetractData]:
    """A free module over upper triangular matrices and the retract of its complex onto homology."""
    algebra = upper_triangular_algebra(field, 2, bound=3)
    mod = free_module(algebra, random_complex(field, rng, -1, 1, max_dim), name="P")
    return mod, homology_retract(mod.E)


def random_seeds(seed: int, count: int) -> List[int]:
    rng = random.Random(seed)
    return [rng.randrange(1 << 30) for _ in range(count)]

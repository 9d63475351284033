"""A-infinity modules, their morphisms, and the DG category Nod of modules over a fixed algebra.

Right modules put E x A^a at index -a, left modules A^a x E. A word with n
tensor factors (E included) lives at index 1 - n. Morphism data is read back
from the column of a bar morphism that lands in E itself (index 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, List, Optional

from .ainfty import AInfAlgebra, _word_clean, _word_witness, ids, stasheff_window
from .categories import ChCategory, acc
from .complexes import Complex, tensor, tensor_map
from .errors import ConsistencyError, StructuralError
from .graded import GradedMap, gmap_equal, sign
from .report import Report
from .twisted import (
    TwistedComplex,
    TwistedMorphism,
    check_twisted,
    tw_compose,
    tw_diff,
    tw_first_difference,
)

RIGHT = "right"
LEFT = "left"


@dataclass(eq=False)
class AInfModule:
    """(E, p_2 .. p_M) over ``algebra``; p_i takes i - 1 letters of A and has degree 2 - i."""

    E: Complex
    algebra: AInfAlgebra
    p: Dict[int, GradedMap]
    bound: int
    side: str = RIGHT
    name: Optional[str] = None

    def __post_init__(self) -> None:
        if self.side not in (RIGHT, LEFT):
            raise StructuralError(f"unknown module side {self.side!r}")
        for i, op in self.p.items():
            if not 2 <= i <= self.bound:
                raise StructuralError(f"operation p_{i} lies outside arities 2..{self.bound}")
            if op.source != self.word(i - 1).space or op.target != self.E.space:
                raise StructuralError(f"p_{i} does not run from the length {i} word to E")
            if op.degree != 2 - i:
                raise StructuralError(f"p_{i} has degree {op.degree}, expected {2 - i}")

    @property
    def field(self):
        return self.E.field

    @property
    def A(self) -> Complex:
        return self.algebra.A

    @property
    def reach(self) -> int:
        """Largest arity among the p's and the algebra's m's."""
        return max(self.bound, self.algebra.bound)

    def word(self, a: int) -> Complex:
        """E x A^a (right) or A^a x E (left)."""
        if a == 0:
            return self.E
        letters = [self.A] * a
        return tensor(self.E, *letters) if self.side == RIGHT else tensor(*letters, self.E)

    def op(self, i: int) -> Optional[GradedMap]:
        op = self.p.get(i)
        return None if op is None or op.is_zero else op

    def without_structure(self) -> "AInfModule":
        """Same E and algebra, all p's zero."""
        return AInfModule(self.E, self.algebra, {}, self.bound, self.side, self.name)

    @cached_property
    def bar(self) -> TwistedComplex:
        return bar_module(self)


def _right_arrow(mod: AInfModule, n_src: int, n_tgt: int) -> Optional[GradedMap]:
    i, k = n_tgt, n_src - n_tgt
    if k < 1:
        return None
    cat = ChCategory(mod.field)
    E, A = mod.E, mod.A
    total = None
    m = mod.algebra.op(k + 1)
    if m is not None:
        for j in range(i - 1):
            term = tensor_map(E.identity, *ids(A, i - j - 2), m, *ids(A, j))
            total = acc(cat, total, cat.scale(sign(j * k), term))
    p = mod.op(k + 1)
    if p is not None:
        total = acc(cat, total, cat.scale(sign((i - 1) * k), tensor_map(p, *ids(A, i - 1))))
    return None if total is None else cat.scale(sign((i - 1) * (k + 1)), total)


def _left_arrow(mod: AInfModule, n_src: int, n_tgt: int) -> Optional[GradedMap]:
    i, k = n_tgt, n_src - n_tgt
    if k < 1:
        return None
    cat = ChCategory(mod.field)
    E, A = mod.E, mod.A
    total = None
    m = mod.algebra.op(k + 1)
    if m is not None:
        for j in range(1, i):
            term = tensor_map(*ids(A, i - j - 1), m, *ids(A, j - 1), E.identity)
            total = acc(cat, total, cat.scale(sign(j * k), term))
    p = mod.op(k + 1)
    if p is not None:
        total = acc(cat, total, tensor_map(*ids(A, i - 1), p))
    return None if total is None else cat.scale(sign((i - 1) * (k + 1)), total)


def bar_module(mod: AInfModule) -> TwistedComplex:
    arrow = _right_arrow if mod.side == RIGHT else _left_arrow
    cat = ChCategory(mod.field)

    def obj(idx: int):
        return mod.word(-idx) if idx <= 0 else None

    def reach(s: int):
        return range(s + 1, min(0, s + mod.reach - 1) + 1)

    return TwistedComplex.streamed_from(
        cat, obj, lambda s, t: arrow(mod, 1 - s, 1 - t), reach,
        lo=None, hi=0, one_sided=True, clean=_word_clean(0, mod.A, mod.E), name=mod.name,
    )


def bar_module_right(mod: AInfModule) -> TwistedComplex:
    if mod.side != RIGHT:
        raise StructuralError("bar_module_right needs a right module")
    return mod.bar


def bar_module_left(mod: AInfModule) -> TwistedComplex:
    if mod.side != LEFT:
        raise StructuralError("bar_module_left needs a left module")
    return mod.bar


def is_module(mod: AInfModule, N: int) -> Report:
    """The twisted condition of the module bar on words with at most N factors."""
    if N < 2:
        raise StructuralError("word-length window must be at least 2")
    report = _word_witness(check_twisted(mod.bar, stasheff_window(N)), 1)
    report.window = [1, N]
    return report


# ---------- morphisms ----------

@dataclass(eq=False)
class ModMorphism:
    """Degree j data (f_1, f_2, ..); f_i takes i - 1 letters of A and has degree j - i + 1."""

    source: AInfModule
    target: AInfModule
    degree: int
    f: Dict[int, GradedMap]
    bound: int

    def __post_init__(self) -> None:
        if self.source.side != self.target.side:
            raise StructuralError("module morphisms join modules of the same side")
        if self.source.algebra is not self.target.algebra:
            raise StructuralError("module morphisms join modules over the same algebra")
        for i, comp in self.f.items():
            if not 1 <= i <= self.bound:
                raise StructuralError(f"component f_{i} lies outside arities 1..{self.bound}")
            if comp.source != self.source.word(i - 1).space or comp.target != self.target.E.space:
                raise StructuralError(f"f_{i} does not run from the length {i} word to the target")
            if comp.degree != self.degree - i + 1:
                raise StructuralError(f"f_{i} has degree {comp.degree}, expected {self.degree - i + 1}")
        self.f = {i: c for i, c in self.f.items() if not c.is_zero}

    @property
    def side(self) -> str:
        return self.source.side

    @property
    def field(self):
        return self.source.field

    def comp(self, i: int) -> Optional[GradedMap]:
        return self.f.get(i)

    @property
    def arities(self) -> List[int]:
        return sorted(self.f)


def strict_morphism(source: AInfModule, target: AInfModule, f1: GradedMap) -> ModMorphism:
    """The morphism with f_1 given and every higher component zero."""
    return ModMorphism(source, target, f1.degree, {1: f1}, 1)


def _bar_component(f: ModMorphism, n_src: int, n_tgt: int) -> Optional[GradedMap]:
    i, k = n_tgt, n_src - n_tgt
    if k < 0 or i < 1:
        return None
    fk = f.comp(k + 1)
    if fk is None:
        return None
    A = f.source.A
    j = f.degree
    if f.side == RIGHT:
        return ChCategory(f.field).scale(sign(j * (i - 1)), tensor_map(fk, *ids(A, i - 1)))
    return ChCategory(f.field).scale(sign((j + k) * (i - 1)), tensor_map(*ids(A, i - 1), fk))


def bar_mod_morphism(f: ModMorphism) -> TwistedMorphism:
    S, T = f.source.bar, f.target.bar

    def reach(s: int):
        return range(s, min(0, s + f.bound - 1) + 1)

    return TwistedMorphism(S, T, f.degree, lambda s, t: _bar_component(f, 1 - s, 1 - t), reach)


def read_back(F: TwistedMorphism, source: AInfModule, target: AInfModule, bound: int) -> ModMorphism:
    """Module data from the column landing in E: f_{k+1} is the component from index -k to 0."""
    comps = {}
    for k in range(bound):
        c = F.component(-k, 0)
        if c is not None:
            comps[k + 1] = c
    return ModMorphism(source, target, F.degree, comps, max(bound, 1))


def _consistent(result: ModMorphism, full: TwistedMorphism, N: Optional[int]) -> ModMorphism:
    if N is None:
        return result
    cells = stasheff_window(N)
    diff = tw_first_difference(bar_mod_morphism(result), full, cells)
    if diff is not None:
        s, t = diff
        raise ConsistencyError(
            "column read-back does not reproduce the bar morphism",
            witness={"i": s, "j": t, "word_length": 1 - s, "target_word_length": 1 - t},
        )
    return result


def mod_compose(g: ModMorphism, f: ModMorphism, check: Optional[int] = None) -> ModMorphism:
    """g after f; ``check`` is a word-length window on which the full bar composite is compared."""
    full = tw_compose(bar_mod_morphism(g), bar_mod_morphism(f))
    bound = f.bound + g.bound - 1
    return _consistent(read_back(full, f.source, g.target, bound), full, check)


def mod_diff(f: ModMorphism, check: Optional[int] = None) -> ModMorphism:
    full = tw_diff(bar_mod_morphism(f))
    bound = f.bound + max(f.source.reach, f.target.reach) - 1
    return _consistent(read_back(full, f.source, f.target, bound), full, check)


def is_closed_mod_morphism(f: ModMorphism, N: int) -> Report:
    """d(f) = 0 on the bars, first offending cell reported on words of length <= N."""
    cells = stasheff_window(N)
    d = tw_diff(bar_mod_morphism(f))
    keep = set(cells)
    for s in cells:
        for t in d.targets(s):
            if t in keep:
                report = Report.failed({"i": s, "j": t, "word_length": 1 - s, "target_word_length": 1 - t,
                                        **ChCategory(f.field).describe(d.component(s, t))})
                report.window = [1, N]
                return report
    return Report(window=[1, N])


def mod_identity(mod: AInfModule) -> ModMorphism:
    return strict_morphism(mod, mod, mod.E.identity)


def mod_zero(source: AInfModule, target: AInfModule, degree: int) -> ModMorphism:
    return ModMorphism(source, target, degree, {}, 1)


def mod_add(f: ModMorphism, g: ModMorphism) -> ModMorphism:
    if f.degree != g.degree:
        raise StructuralError(f"cannot add module morphisms of degrees {f.degree} and {g.degree}")
    cat = ChCategory(f.field)
    comps = {}
    for i in set(f.f) | set(g.f):
        comps[i] = acc(cat, f.comp(i), g.comp(i))
    return ModMorphism(f.source, f.target, f.degree, comps, max(f.bound, g.bound))


def mod_scale(c, f: ModMorphism) -> ModMorphism:
    cat = ChCategory(f.field)
    return ModMorphism(f.source, f.target, f.degree, {i: cat.scale(c, v) for i, v in f.f.items()}, f.bound)


def mod_equal(f: ModMorphism, g: ModMorphism) -> bool:
    if f.degree != g.degree or f.arities != g.arities:
        return False
    return all(gmap_equal(f.f[i], g.f[i]) for i in f.f)


def modules_equal(a: AInfModule, b: AInfModule) -> bool:
    if a is b:
        return True
    if a.algebra is not b.algebra or a.side != b.side or a.E.space != b.E.space:
        return False
    if not gmap_equal(a.E.d, b.E.d):
        return False
    arities = {i for i in a.p if a.op(i)} | {i for i in b.p if b.op(i)}
    return all(a.op(i) is not None and b.op(i) is not None and gmap_equal(a.op(i), b.op(i)) for i in arities)


class NodCategory:
    """A-infinity modules over one algebra with their morphism complexes."""

    name = "nod"

    def __init__(self, algebra: AInfAlgebra, check: Optional[int] = None) -> None:
        self.algebra = algebra
        self.field = algebra.field
        self.check = check

    def degree(self, f: ModMorphism) -> int:
        return f.degree

    def compose(self, g: ModMorphism, f: ModMorphism) -> ModMorphism:
        return mod_compose(g, f, self.check)

    def diff(self, f: ModMorphism, source=None, target=None) -> ModMorphism:
        return mod_diff(f, self.check)

    def add(self, f: ModMorphism, g: ModMorphism) -> ModMorphism:
        return mod_add(f, g)

    def scale(self, c, f: ModMorphism) -> ModMorphism:
        return mod_scale(c, f)

    def is_zero(self, f: ModMorphism) -> bool:
        return not f.f

    def equal(self, f: ModMorphism, g: ModMorphism) -> bool:
        return mod_equal(f, g)

    def identity(self, mod: AInfModule) -> ModMorphism:
        return mod_identity(mod)

    def zero(self, source: AInfModule, target: AInfModule, degree: int) -> ModMorphism:
        return mod_zero(source, target, degree)

    def same_object(self, a: AInfModule, b: AInfModule) -> bool:
        return modules_equal(a, b)

    def describe(self, f: ModMorphism) -> Dict[str, Any]:
        return {"degree": f.degree, "arities": f.arities}

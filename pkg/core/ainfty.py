"""A-infinity algebras and their morphisms through the bar construction.

The bar construction of A puts A^{w} at index -(w - 1) and is a one-sided
twisted complex over Ch, unbounded below; A is an A-infinity algebra exactly
when it satisfies the twisted condition. Operations above the arity bound are
declared zero, which keeps every arrow of the stream finite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Tuple

from .categories import ChCategory, acc
from .complexes import Complex, tensor_map, tensor_power
from .errors import StructuralError
from .graded import GradedMap, sign
from .report import Report
from .twisted import (
    TwistedComplex,
    TwistedMorphism,
    check_twisted,
    tw_diff,
    twisted_residual,
)


def compositions(total: int, parts: int, bound: int) -> Iterator[Tuple[int, ...]]:
    """Ordered tuples of ``parts`` integers in [1, bound] summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, min(bound, total - parts + 1) + 1):
        for rest in compositions(total - first, parts - 1, bound):
            yield (first,) + rest


def ids(C: Complex, n: int) -> List[GradedMap]:
    return [C.identity] * n


def bar_clean(lo: Optional[int], hi: Optional[int], w0: int, base_range, step_range):
    """Total degrees untouched by words outside the index window [lo, hi].

    A word of length w (index w0 - w) occupies total degrees inside
    [c_lo + w * s_lo, c_hi + w * s_hi] with (c_lo, c_hi) = ``base_range`` and
    (s_lo, s_hi) the degree range of A shifted down by one. Returns None when
    arbitrarily long words can reach every degree.
    """
    if base_range is None:
        return (None, None)
    c_lo, c_hi = base_range
    inside_lo = w0 if hi is None else max(w0, w0 - hi)
    inside_hi = None if lo is None else w0 - lo
    a, b = None, None
    if step_range is None:
        if inside_hi is not None and inside_hi < w0:
            return None
        short = [] if inside_lo == w0 else [w0]
    else:
        s_lo, s_hi = step_range
        if inside_hi is not None:
            if s_hi < 0:
                a = c_hi + (inside_hi + 1) * s_hi + 1
            elif s_lo > 0:
                b = c_lo + (inside_hi + 1) * s_lo - 1
            else:
                return None
        short = list(range(w0, inside_lo))
    for w in short:
        r_lo = c_lo + w * (step_range[0] if step_range else 0)
        r_hi = c_hi + w * (step_range[1] if step_range else 0)
        if step_range is not None and step_range[1] < 0:
            b = r_lo - 1 if b is None else min(b, r_lo - 1)
        else:
            a = r_hi + 1 if a is None else max(a, r_hi + 1)
    if a is not None and b is not None and a > b:
        return None
    return (a, b)


def _step(A: Complex):
    r = A.space.degree_range()
    return None if r is None else (r[0] - 1, r[1] - 1)


# ---------- algebras ----------

@dataclass(eq=False)
class AInfAlgebra:
    """(A, m_2 .. m_M) with m_i: A^i -> A of degree 2 - i; m_i = 0 above ``bound``."""

    A: Complex
    m: Dict[int, GradedMap]
    bound: int
    name: Optional[str] = None

    def __post_init__(self) -> None:
        if self.bound < 2:
            raise StructuralError("arity bound must be at least 2")
        for i, op in self.m.items():
            if not 2 <= i <= self.bound:
                raise StructuralError(f"operation m_{i} lies outside arities 2..{self.bound}")
            want_src = tensor_power(self.A, i).space
            if op.source != want_src or op.target != self.A.space:
                raise StructuralError(f"m_{i} does not run A^{i} -> A")
            if op.degree != 2 - i:
                raise StructuralError(f"m_{i} has degree {op.degree}, expected {2 - i}")

    @property
    def field(self):
        return self.A.field

    def op(self, i: int) -> Optional[GradedMap]:
        op = self.m.get(i)
        return None if op is None or op.is_zero else op

    @cached_property
    def bar(self) -> TwistedComplex:
        return bar_algebra(self)


def _alg_arrow(alg: AInfAlgebra, src_len: int, tgt_len: int) -> Optional[GradedMap]:
    """sum_j (-1)^{(i-1)(k+1) + jk} id^{i-j-1} x m_{k+1} x id^j from A^{i+k} to A^i."""
    i, k = tgt_len, src_len - tgt_len
    m = alg.op(k + 1)
    if m is None or k < 1:
        return None
    cat = ChCategory(alg.field)
    total = None
    for j in range(i):
        term = tensor_map(*ids(alg.A, i - j - 1), m, *ids(alg.A, j))
        total = acc(cat, total, cat.scale(sign((i - 1) * (k + 1) + j * k), term))
    return total


def bar_algebra(alg: AInfAlgebra) -> TwistedComplex:
    """A^{w} at index -(w - 1), w >= 1."""
    A = alg.A
    cat = ChCategory(alg.field)

    def obj(idx: int):
        return tensor_power(A, 1 - idx) if idx <= 0 else None

    def reach(s: int):
        return range(s + 1, min(0, s + alg.bound - 1) + 1)

    return TwistedComplex.streamed_from(
        cat, obj, lambda s, t: _alg_arrow(alg, 1 - s, 1 - t), reach,
        lo=None, hi=0, one_sided=True, clean=_word_clean(1, A, A), name=alg.name,
    )


def _word_clean(w0: int, A: Complex, E: Optional[Complex]):
    """Degree certificate of the algebra bar (w0 = 1) or of a module bar over E (w0 = 0)."""

    def clean(lo=None, hi=None):
        step = _step(A)
        if w0 == 1:
            if step is None:
                return (None, None)
            return bar_clean(lo, hi, 1, (1, 1), step)
        er = E.space.degree_range()
        return bar_clean(lo, hi, 0, er, step)

    return clean


def stasheff_window(N: int) -> List[int]:
    """Indices of words of length 1..N."""
    if N < 1:
        raise StructuralError("word-length window must be positive")
    return list(range(-(N - 1), 1))


def _word_witness(report: Report, w0: int) -> Report:
    if report.ok:
        return report
    w = dict(report.witness)
    w["word_length"] = w0 - w["i"]
    w["target_word_length"] = w0 - w["j"]
    return Report.failed(w)


def is_ainfty_algebra(alg: AInfAlgebra, N: int) -> Report:
    if N < 2:
        raise StructuralError("word-length window must be at least 2")
    report = _word_witness(check_twisted(alg.bar, stasheff_window(N)), 1)
    report.window = [1, N]
    return report


def stasheff_residual(alg: AInfAlgebra, src_len: int, tgt_len: int):
    return twisted_residual(alg.bar, 1 - src_len, 1 - tgt_len)


# ---------- algebra morphisms ----------

@dataclass(eq=False)
class AInfAlgMorphism:
    """(f_1, f_2, ..) with f_i: A^i -> B of degree 1 - i; zero above ``bound``."""

    source: AInfAlgebra
    target: AInfAlgebra
    f: Dict[int, GradedMap]
    bound: int

    def __post_init__(self) -> None:
        for i, comp in self.f.items():
            if not 1 <= i <= self.bound:
                raise StructuralError(f"component f_{i} lies outside arities 1..{self.bound}")
            if comp.source != tensor_power(self.source.A, i).space or comp.target != self.target.A.space:
                raise StructuralError(f"f_{i} does not run A^{i} -> B")
            if comp.degree != 1 - i:
                raise StructuralError(f"f_{i} has degree {comp.degree}, expected {1 - i}")

    def comp(self, i: int) -> Optional[GradedMap]:
        c = self.f.get(i)
        return None if c is None or c.is_zero else c


def morphism_sign(t: Tuple[int, ...]) -> int:
    """(-1)^{sum_{l >= 2} (1 - t_l)(t_1 + .. + t_l)}."""
    e = 0
    running = t[0]
    for tl in t[1:]:
        running += tl
        e += (1 - tl) * running
    return sign(e)


def _alg_morphism_component(f: AInfAlgMorphism, src_len: int, tgt_len: int) -> Optional[GradedMap]:
    cat = ChCategory(f.source.field)
    total = None
    for t in compositions(src_len, tgt_len, f.bound):
        parts = [f.comp(x) for x in t]
        if any(p is None for p in parts):
            continue
        total = acc(cat, total, cat.scale(morphism_sign(t), tensor_map(*parts)))
    return total


def bar_alg_morphism(f: AInfAlgMorphism) -> TwistedMorphism:
    """Degree 0 morphism of bars; component A^{i+k} -> B^i sums the signed words f_{t_1} x .. x f_{t_i}."""
    S, T = f.source.bar, f.target.bar

    def reach(s: int):
        n = 1 - s
        return [1 - i for i in range(1, n + 1) if i * f.bound >= n]

    return TwistedMorphism(S, T, 0, lambda s, t: _alg_morphism_component(f, 1 - s, 1 - t), reach)


def is_alg_morphism(f: AInfAlgMorphism, N: int) -> Report:
    cells = stasheff_window(N)
    d = tw_diff(bar_alg_morphism(f))
    for s in cells:
        for t in d.targets(s):
            if t in cells:
                report = Report.failed(
                    {"i": s, "j": t, "word_length": 1 - s, "target_word_length": 1 - t,
                     **ChCategory(f.source.field).describe(d.component(s, t))}
                )
                report.window = [1, N]
                return report
    return Report(window=[1, N])

"""Twisted bicomplexes, cxrow / cxcol, reflect and sigma.

A bicomplex is a twisted complex indexed by pairs (i, j) with weight i + j, so
the twisted condition, the hom differential and composition are the generic
ones from :mod:`core.twisted`; only the index shape and the passage to and from
complexes of complexes live here.
"""

from __future__ import annotations

from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .categories import ChCategory, acc
from .complexes import complex_equal
from .errors import OneSidedError, PreconditionError, StructuralError, SupportError
from .graded import sign
from .report import Report
from .twisted import (
    Convolution,
    TwistedBase,
    TwistedCategory,
    TwistedComplex,
    TwistedMorphism,
    _convolve_cells,
    check_twisted,
    convolve,
    convolve_morphism,
    tw_diff,
    tw_first_difference,
)

Cell = Tuple[int, int]
Window2 = Tuple[int, int, int, int]


class TwistedBicomplex(TwistedBase):
    """Objects a_ij and arrows alpha_ijkl of degree (i + j) - (k + l) + 1."""

    kind = "bitwisted"

    def __init__(self, category, object_fn, arrow_fn, reach_fn, *, support: Optional[Sequence[Cell]],
                 streamed: bool, **kw) -> None:
        super().__init__(category, object_fn, arrow_fn, reach_fn, streamed=streamed, **kw)
        self.support = None if support is None else tuple(sorted(support))

    @staticmethod
    def weight(idx: Cell) -> int:
        return idx[0] + idx[1]

    @classmethod
    def bounded(cls, category, objects: Dict[Cell, Any], diffs: Dict[Tuple[Cell, Cell], Any],
                name: Optional[str] = None) -> "TwistedBicomplex":
        objects = {tuple(c): a for c, a in objects.items() if a is not None}
        by_source: Dict[Cell, Dict[Cell, Any]] = {}
        for (s, t), a in diffs.items():
            s, t = tuple(s), tuple(t)
            if s not in objects or t not in objects:
                raise StructuralError(f"arrow {list(s)}->{list(t)} touches an absent object")
            want = s[0] + s[1] - t[0] - t[1] + 1
            if category.degree(a) != want:
                raise StructuralError(
                    f"arrow {list(s)}->{list(t)} has degree {category.degree(a)}, expected {want}",
                    witness={"i": s[0], "j": s[1], "k": t[0], "l": t[1]},
                )
            by_source.setdefault(s, {})[t] = a
        return cls(category, objects.get,
                   lambda s, t: by_source.get(s, {}).get(t),
                   lambda s: by_source.get(s, {}).keys(),
                   support=list(objects), streamed=False, name=name)

    def cells(self, window: Optional[Window2] = None) -> List[Cell]:
        if self.support is not None:
            if window is None:
                return list(self.support)
            ilo, ihi, jlo, jhi = window
            return [c for c in self.support if ilo <= c[0] <= ihi and jlo <= c[1] <= jhi]
        if window is None:
            raise SupportError("a streamed bicomplex needs an explicit window")
        ilo, ihi, jlo, jhi = window
        return [c for c in product(range(ilo, ihi + 1), range(jlo, jhi + 1)) if self.obj(c) is not None]

    def arrow_cells(self, cells: Sequence[Cell]):
        for s in cells:
            for t in self.targets(s):
                yield s, t


def _bi_witness(report: Report) -> Report:
    if report.ok:
        return report
    w = dict(report.witness)
    (i, j), (k, l) = w.pop("i"), w.pop("j")
    return Report.failed({"i": i, "j": j, "k": k, "l": l, **w})


def check_bitwisted(B: TwistedBicomplex, window: Optional[Window2] = None) -> Report:
    """(-1)^{k+l} d alpha_ijkl + sum_mn alpha_mnkl alpha_ijmn on every cell pair of the window."""
    return _bi_witness(check_twisted(B, B.cells(window)))


def bitw_diff(f: TwistedMorphism) -> TwistedMorphism:
    return tw_diff(f)


def bicomplex_equal(A: TwistedBicomplex, B: TwistedBicomplex, window: Optional[Window2] = None) -> bool:
    cat = A.category
    cells = A.cells(window)
    if cells != B.cells(window):
        return False
    for c in cells:
        if not cat.same_object(A.obj(c), B.obj(c)):
            return False
    keep = set(cells)
    for c in cells:
        ta = [t for t in A.targets(c) if t in keep]
        if ta != [t for t in B.targets(c) if t in keep]:
            return False
        if not all(cat.equal(A.arrow(c, t), B.arrow(c, t)) for t in ta):
            return False
    return True


def one_sided_flags(B: TwistedBicomplex, window: Optional[Window2] = None) -> Dict[str, bool]:
    arrows = list(B.arrow_cells(B.cells(window)))
    return {
        "vertically_one_sided": all(t[0] >= s[0] for s, t in arrows),
        "horizontally_one_sided": all(t[1] >= s[1] for s, t in arrows),
    }


# ---------- complexes of complexes ----------

def _row_support(CC: TwistedComplex) -> Optional[List[Cell]]:
    if CC.streamed or any(CC.obj(i).streamed for i in CC.cells()):
        return None
    return [(i, j) for i in CC.cells() for j in CC.obj(i).cells()]


def cxrow(CC: TwistedComplex) -> TwistedBicomplex:
    """Rows E_i laid at outer index i; row i carries its differentials times (-1)^i."""
    base = CC.category.base

    def obj(c):
        E = CC.obj(c[0])
        return None if E is None else E.obj(c[1])

    def arrow(s, t):
        (i, j), (k, l) = s, t
        total = None
        outer = CC.arrow(i, k)
        if outer is not None:
            total = outer.component(j, l)
        if i == k:
            inner = CC.obj(i).arrow(j, l)
            if inner is not None:
                total = acc(base, total, base.scale(sign(i), inner))
        return total

    def reach(s):
        i, j = s
        out = set()
        for k in CC.targets(i):
            out.update((k, l) for l in CC.arrow(i, k).targets(j))
        out.update((i, l) for l in CC.obj(i).targets(j))
        return out

    return TwistedBicomplex(base, obj, arrow, reach, support=_row_support(CC),
                            streamed=CC.streamed, name=CC.name)


def cxcol(CC: TwistedComplex) -> TwistedBicomplex:
    """Columns: object (a, b) is the a-th term of the b-th complex."""
    row = cxrow(CC)
    return reflect(row)


def reflect(B: TwistedBicomplex) -> TwistedBicomplex:
    """Transpose along the diagonal: a'_ij = a_ji and alpha'_ijkl = alpha_jilk."""
    support = None if B.support is None else [(j, i) for i, j in B.support]
    return TwistedBicomplex(
        B.category,
        lambda c: B.obj((c[1], c[0])),
        lambda s, t: B.arrow((s[1], s[0]), (t[1], t[0])),
        lambda s: [(l, k) for k, l in B.targets((s[1], s[0]))],
        support=support, streamed=B.streamed, name=B.name,
    )


def sigma(B: TwistedBicomplex) -> TwistedBicomplex:
    """Every alpha_ijkl multiplied by (-1)^{ij + kl}."""
    cat = B.category

    def arrow(s, t):
        a = B.arrow(s, t)
        return None if a is None else cat.scale(sign(s[0] * s[1] + t[0] * t[1]), a)

    return TwistedBicomplex(cat, B.obj, arrow, B.targets, support=B.support, streamed=B.streamed, name=B.name)


def cxrow_morphism(F: TwistedMorphism, source: TwistedBicomplex, target: TwistedBicomplex) -> TwistedMorphism:
    """Components of a morphism of complexes of complexes, copied cell by cell."""

    def comp(s, t):
        outer = F.component(s[0], t[0])
        return None if outer is None else outer.component(s[1], t[1])

    def reach(s):
        i, j = s
        return [(k, l) for k in F.targets(i) for l in F.component(i, k).targets(j)]

    return TwistedMorphism(source, target, F.degree, comp, reach)


def cxcol_morphism(F: TwistedMorphism, source: TwistedBicomplex, target: TwistedBicomplex) -> TwistedMorphism:
    def comp(s, t):
        outer = F.component(s[1], t[1])
        return None if outer is None else outer.component(s[0], t[0])

    def reach(s):
        a, b = s
        return [(c, d) for d in F.targets(b) for c in F.component(b, d).targets(a)]

    return TwistedMorphism(source, target, F.degree, comp, reach)


def reflect_morphism(f: TwistedMorphism, source: TwistedBicomplex, target: TwistedBicomplex) -> TwistedMorphism:
    return TwistedMorphism(
        source, target, f.degree,
        lambda s, t: f.component((s[1], s[0]), (t[1], t[0])),
        lambda s: [(l, k) for k, l in f.targets((s[1], s[0]))],
    )


def sigma_morphism(f: TwistedMorphism, source: TwistedBicomplex, target: TwistedBicomplex) -> TwistedMorphism:
    cat = f.category

    def comp(s, t):
        c = f.component(s, t)
        return None if c is None else cat.scale(sign(s[0] * s[1] + t[0] * t[1]), c)

    return TwistedMorphism(source, target, f.degree, comp, f.targets)


def _require(B: TwistedBicomplex, cells: Sequence[Cell], axis: int, what: str) -> None:
    for s, t in B.arrow_cells(cells):
        if t[axis] < s[axis]:
            raise OneSidedError(
                f"bicomplex is not {what} one-sided: arrow {list(s)}->{list(t)} is nonzero",
                witness={"i": s[0], "j": s[1], "k": t[0], "l": t[1]},
            )


def cxrow_inverse(B: TwistedBicomplex, window: Optional[Window2] = None) -> TwistedComplex:
    """The complex of rows of a vertically one-sided bicomplex."""
    cells = B.cells(window)
    _require(B, cells, 0, "vertically")
    base = B.category
    rows: Dict[int, List[int]] = {}
    for i, j in cells:
        rows.setdefault(i, []).append(j)
    keep = set(cells)
    inner: Dict[int, TwistedComplex] = {}
    for i, js in rows.items():
        objects = {j: B.obj((i, j)) for j in js}
        diffs = {
            (j, l): base.scale(sign(i), B.arrow((i, j), (i, l)))
            for j in js for k, l in B.targets((i, j)) if k == i and (k, l) in keep
        }
        inner[i] = TwistedComplex.bounded(base, objects, diffs)
    outer_cat = TwistedCategory(base)
    outer: Dict[Tuple[int, int], TwistedMorphism] = {}
    for i, js in rows.items():
        for k in rows:
            if k <= i:
                continue
            comps = {(j, l): B.arrow((i, j), (k, l))
                     for j in js for kk, l in B.targets((i, j)) if kk == k and (k, l) in keep}
            if comps:
                outer[(i, k)] = TwistedMorphism.bounded(inner[i], inner[k], i - k + 1, comps)
    return TwistedComplex.bounded(outer_cat, inner, outer, name=B.name)


def cxcol_inverse(B: TwistedBicomplex, window: Optional[Window2] = None) -> TwistedComplex:
    """The complex of columns of a horizontally one-sided bicomplex."""
    cells = B.cells(window)
    _require(B, cells, 1, "horizontally")
    flipped = None if window is None else (window[2], window[3], window[0], window[1])
    return cxrow_inverse(reflect(B), flipped)


def monodromy(CC: TwistedComplex) -> TwistedComplex:
    """cxrow_inverse after cxcol; defined when the columns of CC form a vertically one-sided bicomplex."""
    return cxrow_inverse(cxcol(CC))


def complex_of_complexes_equal(CC: TwistedComplex, DD: TwistedComplex) -> bool:
    return TwistedCategory(CC.category).same_object(CC, DD)


# ---------- convolution ----------

def layout_cells(cells: Sequence[Cell], layout: str) -> List[Cell]:
    if layout == "row":
        return sorted(cells)
    if layout == "col":
        return sorted(cells, key=lambda c: (c[1], c[0]))
    raise StructuralError(f"unknown layout {layout!r}; expected 'row' or 'col'")


def convolve_bicomplex(B: TwistedBicomplex, window: Optional[Window2] = None, layout: str = "row") -> Convolution:
    """Sum of the a_ij[-i-j] with natural differential (-1)^{i+j} d, perturbed by the alphas."""
    if not isinstance(B.category, ChCategory):
        raise StructuralError("convolution is defined for bicomplexes over Ch")
    cells = B.cells(window)
    report = check_bitwisted(B, window)
    if not report.ok:
        raise PreconditionError("input is not a twisted bicomplex", witness=report.witness)
    return _convolve_cells(B, layout_cells(cells, layout))


def convolve_twice(CC: TwistedComplex) -> Convolution:
    """Convolve every row, then the resulting complex of convolutions."""
    inner = {i: convolve(CC.obj(i)) for i in CC.cells()}
    ch = CC.category.base
    arrows = {
        (i, k): convolve_morphism(CC.arrow(i, k), inner[i], inner[k])
        for i in CC.cells() for k in CC.targets(i)
    }
    outer = TwistedComplex.bounded(ch, {i: c.complex for i, c in inner.items()}, arrows)
    return convolve(outer)


def convolutions_agree(a: Convolution, b: Convolution) -> bool:
    return complex_equal(a.complex, b.complex)


def first_morphism_difference(f: TwistedMorphism, g: TwistedMorphism, cells: Sequence[Cell]):
    return tw_first_difference(f, g, cells)

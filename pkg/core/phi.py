"""The embedding of twisted complexes of right modules into modules over Ch.

A twisted complex X = ((E_r, p_r), alpha_rt) over Nod goes to a single module
on the convolution of (E_r, alpha_rt,1); its structure map P_{k+1} has block
(r, t) equal to (-1)^{rk} alpha_rt,k+1 + delta_rt (-1)^{r(k+1)} p_r,k+1.
"""

from __future__ import annotations

from typing import Any, Callable, Dict, Optional, Tuple

from .categories import ChCategory
from .complexes import Complex, tensor
from .errors import PreconditionError, StructuralError
from .graded import GradedMap, GradedSpace, basis, gmap_from_entries, key_degree, positions, sign, tensor_spaces
from .modules import RIGHT, AInfModule, ModMorphism, NodCategory, bar_mod_morphism, mod_compose, mod_diff, mod_equal
from .bitwisted import cxcol, cxrow, sigma
from .report import Report
from .twisted import (
    Convolution,
    TwistedCategory,
    TwistedComplex,
    TwistedMorphism,
    _convolve_cells,
    check_twisted,
    tw_compose,
    tw_diff,
    twisted_residual,
)


def _require_right(X: TwistedComplex) -> None:
    if not isinstance(X.category, NodCategory):
        raise StructuralError("phi takes a twisted complex of modules")
    for r in X.cells():
        if X.obj(r).side != RIGHT:
            raise StructuralError("phi is defined for right modules")


def underlying(X: TwistedComplex) -> TwistedComplex:
    """(E_r, alpha_rt,1) as a twisted complex over Ch."""
    ch = ChCategory(X.category.field)
    objects = {r: X.obj(r).E for r in X.cells()}
    diffs = {(r, t): X.arrow(r, t).comp(1) for r in X.cells() for t in X.targets(r) if X.arrow(r, t).comp(1)}
    return TwistedComplex.bounded(ch, objects, diffs)


def _local_position(space: GradedSpace, part) -> Tuple[int, int]:
    """(degree, position) of an E-part key inside E."""
    n = key_degree(part)
    return n, (positions(space, n)[part] if space.factors else part[0][1])


def _word_position(W: Complex, key) -> int:
    return positions(W.space, key_degree(key))[key] if W.space.factors else key[0][1]


def assemble(source: Convolution, target: Convolution, A: Complex, k: int, degree: int,
             block: Callable[[Any, Any], Optional[GradedMap]]) -> GradedMap:
    """The map conv(S) x A^k -> conv(T) whose (r, t) block is ``block(r, t)``; no signs are added."""
    src_space = tensor(source.complex, *([A] * k)).space if k else source.complex.space
    tgt_space = target.complex.space
    tail = k * len(A.space.flat_factors)
    entries: Dict[int, Dict[Tuple[int, int], Any]] = {}
    for ks, r in enumerate(source.cells):
        wr = source.weights[ks]
        for kt, t in enumerate(target.cells):
            wt = target.weights[kt]
            b = block(r, t)
            if b is None:
                continue
            width = len(b.source.flat_factors) - tail
            E = tensor_spaces(*b.source.flat_factors[:width])
            for n, row, col, v in b.nonzero_entries():
                if tail:
                    skey = basis(b.source, n)[col]
                    e, pos = _local_position(E, skey[:width])
                    rest = skey[width:]
                else:
                    e, pos, rest = n, col, ()
                lifted = ((e + wr, source.offset(ks, e + wr) + pos),) + rest
                n_total = key_degree(lifted)
                c = positions(src_space, n_total)[lifted] if k else lifted[0][1]
                rr = target.offset(kt, n + b.degree + wt) + row
                entries.setdefault(n_total, {})[(rr, c)] = v
    return gmap_from_entries(src_space, tgt_space, degree, entries, source.complex.field)


def split(M: GradedMap, source: Convolution, target: Convolution, r: Any, t: Any,
          S_word: Complex, T_word: Complex, S_E: Complex, T_E: Complex) -> Optional[GradedMap]:
    """Block (r, t) of a map conv(S) x A^a -> conv(T) x A^b, on E_r x A^a -> F_t x A^b."""
    ks, kt = source.index(r), target.index(t)
    wr, wt = source.weights[ks], target.weights[kt]
    entries: Dict[int, Dict[Tuple[int, int], Any]] = {}
    for n, row, col, v in M.nonzero_entries():
        skey = basis(M.source, n)[col]
        tkey = basis(M.target, n + M.degree)[row]
        s_summand, s_pos = source.locate(skey[0][0], skey[0][1])
        t_summand, t_pos = target.locate(tkey[0][0], tkey[0][1])
        if s_summand != ks or t_summand != kt:
            continue
        s_local = basis(S_E.space, skey[0][0] - wr)[s_pos] + skey[1:]
        t_local = basis(T_E.space, tkey[0][0] - wt)[t_pos] + tkey[1:]
        entries.setdefault(key_degree(s_local), {})[(_word_position(T_word, t_local), _word_position(S_word, s_local))] = v
    if not entries:
        return None
    return gmap_from_entries(S_word.space, T_word.space, M.degree + wr - wt, entries, M.field)


class PhiObject:
    """Phi of a twisted complex of modules: the module plus the convolution it lives on."""

    def __init__(self, X: TwistedComplex, module: AInfModule, conv: Convolution) -> None:
        self.X = X
        self.module = module
        self.conv = conv


def phi_object(X: TwistedComplex, check: bool = True) -> PhiObject:
    """Phi(X); with ``check`` the twisted condition is verified first."""
    _require_right(X)
    if check:
        report = check_twisted(X, X.cells())
        if not report.ok:
            i, j = report.witness["i"], report.witness["j"]
            raise PreconditionError("input is not a twisted complex of modules",
                                    residual=twisted_residual(X, i, j), witness=report.witness)
    cells = X.cells()
    algebra = X.category.algebra
    conv = _convolve_cells(underlying(X), cells)
    bound = max([X.obj(r).bound for r in cells] +
                [X.arrow(r, t).bound for r in cells for t in X.targets(r)] + [2])

    def structure(k: int) -> GradedMap:
        def block(r, t):
            cat = ChCategory(algebra.field)
            total = None
            arrow = X.arrow(r, t)
            if arrow is not None and arrow.comp(k + 1) is not None:
                total = cat.scale(sign(r * k), arrow.comp(k + 1))
            if r == t and X.obj(r).op(k + 1) is not None:
                term = cat.scale(sign(r * (k + 1)), X.obj(r).op(k + 1))
                total = term if total is None else cat.add(total, term)
            return total

        return assemble(conv, conv, algebra.A, k, 1 - k, block)

    p = {k + 1: structure(k) for k in range(1, bound)}
    module = AInfModule(conv.complex, algebra, p, bound, RIGHT, name=X.name)
    return PhiObject(X, module, conv)


def phi_morphism(F: TwistedMorphism, source: PhiObject, target: PhiObject) -> ModMorphism:
    """Phi(F)_{k+1} has block (r, t) equal to (-1)^{rk} f_rt,k+1."""
    cells = source.X.cells()
    bound = max([F.component(r, t).bound for r in cells for t in F.targets(r)] + [1])
    A = source.module.A
    cat = ChCategory(A.field)

    def data(k: int) -> GradedMap:
        def block(r, t):
            c = F.component(r, t)
            if c is None or c.comp(k + 1) is None:
                return None
            return cat.scale(sign(r * k), c.comp(k + 1))

        return assemble(source.conv, target.conv, A, k, F.degree - k, block)

    comps = {k + 1: data(k) for k in range(bound)}
    return ModMorphism(source.module, target.module, F.degree, comps, bound)


def phi_morphism_inverse(f: ModMorphism, source: PhiObject, target: PhiObject) -> TwistedMorphism:
    """Recover the components f_rt from Phi(F); inverse of :func:`phi_morphism`."""
    cat = ChCategory(f.field)
    comps = {}
    for r in source.X.cells():
        Er = source.X.obj(r)
        for t in target.X.cells():
            Ft = target.X.obj(t)
            data = {}
            for i, m in f.f.items():
                k = i - 1
                b = split(m, source.conv, target.conv, r, t, Er.word(k), Ft.E, Er.E, Ft.E)
                if b is not None:
                    data[i] = cat.scale(sign(r * k), b)
            if data:
                comps[(r, t)] = ModMorphism(Er, Ft, f.degree + r - t, data, max(data))
    return TwistedMorphism.bounded(source.X, target.X, f.degree, comps)


# ---------- the commuting square ----------

def square_window(X: TwistedComplex, N: int) -> Tuple[int, int, int, int]:
    cells = X.cells()
    return (-(N - 1), 0, min(cells), max(cells))


def phi_left_side(X: TwistedComplex, N: int):
    """sigma(cxcol(bar of X)): the module bars B(E_r) joined by the bars of alpha_rt."""
    ch = ChCategory(X.category.field)
    outer = TwistedCategory(ch, window=(-(N - 1), 0))
    cells = X.cells()
    objects = {r: X.obj(r).bar for r in cells}
    arrows = {(r, t): bar_mod_morphism(X.arrow(r, t)) for r in cells for t in X.targets(r)}
    CC = TwistedComplex.bounded(outer, objects, arrows)
    return sigma(cxcol(CC))


def phi_right_side(phi: PhiObject, N: int):
    """cxrow of the bar of Phi(X), each word conv(X) x A^a split back along the E_r."""
    X, conv, mod = phi.X, phi.conv, phi.module
    ch = ChCategory(mod.field)
    bar = mod.bar
    cells = X.cells()
    outer = TwistedCategory(ch, window=(min(cells), max(cells)))

    def word(r, a):
        return X.obj(r).word(a)

    def row(idx: int) -> Optional[TwistedComplex]:
        if idx > 0:
            return None
        a = -idx
        D = bar.obj(idx).d
        objects = {r: word(r, a) for r in cells}
        diffs = {}
        for r in cells:
            for t in cells:
                b = split(D, conv, conv, r, t, word(r, a), word(t, a), X.obj(r).E, X.obj(t).E)
                if r == t:
                    nat = ch.scale(sign(r), word(r, a).d)
                    b = ch.scale(-1, nat) if b is None else ch.add(b, ch.scale(-1, nat))
                if b is not None and not b.is_zero:
                    diffs[(r, t)] = b
        return TwistedComplex.bounded(ch, objects, diffs)

    def arrow(s: int, t_idx: int):
        M = bar.arrow(s, t_idx)
        if M is None:
            return None
        a, b = -s, -t_idx
        src, tgt = CC.obj(s), CC.obj(t_idx)
        comps = {}
        for r in cells:
            for t in cells:
                blk = split(M, conv, conv, r, t, word(r, a), word(t, b), X.obj(r).E, X.obj(t).E)
                if blk is not None:
                    comps[(r, t)] = blk
        return TwistedMorphism.bounded(src, tgt, s - t_idx + 1, comps)

    CC = TwistedComplex.streamed_from(outer, row, arrow, bar.targets, hi=0, one_sided=True)
    return cxrow(CC)


def phi_check_square(X: TwistedComplex, N: int) -> Report:
    """Cellwise equality of sigma(cxcol(bar X)) and cxrow(bar Phi(X)) on words of length <= N."""
    phi = phi_object(X)
    window = square_window(X, N)
    left = phi_left_side(X, N)
    right = phi_right_side(phi, N)
    report = _first_square_difference(left, right, window)
    report.window = list(window)
    return report


def _first_square_difference(left, right, window) -> Report:
    cat = left.category
    cells = left.cells(window)
    if cells != right.cells(window):
        return Report.failed({"reason": "cells", "cells": [list(c) for c in cells]})
    for c in cells:
        if not cat.same_object(left.obj(c), right.obj(c)):
            return Report.failed({"i": c[0], "j": c[1], "reason": "object"})
    keep = set(cells)
    for s in cells:
        for t in sorted(set(left.targets(s)) | set(right.targets(s))):
            if t not in keep:
                continue
            a, b = left.arrow(s, t), right.arrow(s, t)
            if a is None and b is None:
                continue
            if a is None or b is None or not cat.equal(a, b):
                return Report.failed({"i": s[0], "j": s[1], "k": t[0], "l": t[1], "reason": "arrow"})
    return Report()


def phi_check_functor(F: TwistedMorphism, G: TwistedMorphism) -> Report:
    """Phi(G F) = Phi(G) Phi(F) and Phi(dF) = d Phi(F) for composable F: X -> Y, G: Y -> Z."""
    X, Y, Z = F.source, F.target, G.target
    px, py, pz = phi_object(X), phi_object(Y), phi_object(Z)
    composed = phi_morphism(tw_compose(G, F), px, pz)
    expected = mod_compose(phi_morphism(G, py, pz), phi_morphism(F, px, py))
    if not mod_equal(composed, expected):
        return Report.failed({"identity": "composition"})
    for f, src, tgt, name in ((F, px, py, "diff_first"), (G, py, pz, "diff_second")):
        if not mod_equal(phi_morphism(tw_diff(f), src, tgt), mod_diff(phi_morphism(f, src, tgt))):
            return Report.failed({"identity": name})
    return Report()

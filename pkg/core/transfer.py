"""Homotopy transfer of A-infinity module structure along a retract.

Everything is computed on the bars of P and Q with the module structure
removed, where mu (the p's as a degree 1 morphism) perturbs the bar of P. With
rho = mu + mu h rho the transferred structure is nu = f rho g, and

    phi = f + f rho h,   psi = g + h rho g,   H = h + h rho h.

Each mu strictly shortens words and h keeps their length, so every component
on words of length <= N is a finite sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .ainfty import stasheff_window
from .categories import ChCategory, acc
from .errors import StructuralError
from .modules import (
    AInfModule,
    ModMorphism,
    bar_mod_morphism,
    is_module,
    read_back,
    strict_morphism,
)
from .graded import gmap_equal
from .report import Report
from .retract import RetractData, check_retract
from .twisted import (
    TwistedMorphism,
    tw_add,
    tw_compose,
    tw_diff,
    tw_first_difference,
    tw_identity,
    tw_scale,
    tw_sub,
)


@dataclass(eq=False)
class BarData:
    """The bar-level ingredients of a transfer problem."""

    P0: AInfModule
    Q0: AInfModule
    mu: TwistedMorphism
    f: TwistedMorphism
    g: TwistedMorphism
    h: TwistedMorphism


@dataclass(eq=False)
class TransferResult:
    module: AInfModule
    phi: ModMorphism
    psi: ModMorphism
    H: ModMorphism
    N: int

    @property
    def q(self):
        return self.module.p


def bar_data(mod: AInfModule, r: RetractData) -> BarData:
    if r.P.space != mod.E.space:
        raise StructuralError("retract does not start at the module's complex")
    P0 = mod.without_structure()
    Q0 = AInfModule(r.Q, mod.algebra, {}, mod.bound, mod.side)
    mu = ModMorphism(P0, P0, 1, {i: op for i, op in mod.p.items()}, mod.bound)
    return BarData(
        P0, Q0,
        bar_mod_morphism(mu),
        bar_mod_morphism(strict_morphism(P0, Q0, r.f)),
        bar_mod_morphism(strict_morphism(Q0, P0, r.g)),
        bar_mod_morphism(strict_morphism(P0, P0, r.h)),
    )


def rho_bar(data: BarData) -> TwistedMorphism:
    """mu + mu h mu + mu h mu h mu + ..., generated through rho = mu + (mu h) rho."""
    mu = data.mu
    muh = tw_compose(mu, data.h)
    cat = ChCategory(data.P0.field)
    rho: TwistedMorphism

    def comp(s: int, t: int):
        total = mu.component(s, t)
        for m in range(s + 1, t):
            left = muh.component(m, t)
            if left is None:
                continue
            right = rho.component(s, m)
            if right is not None:
                total = acc(cat, total, cat.compose(left, right))
        return total

    rho = TwistedMorphism(mu.source, mu.target, 1, comp, lambda s: range(s + 1, 1))
    return rho


def transfer(mod: AInfModule, r: RetractData, N: int) -> TransferResult:
    """Transferred structure on Q with comparison maps, all up to arity N."""
    if N < 2:
        raise StructuralError("word-length window must be at least 2")
    check_retract(r)
    data = bar_data(mod, r)
    rho = rho_bar(data)
    f, g, h = data.f, data.g, data.h
    rho_g = tw_compose(rho, g)
    rho_h = tw_compose(rho, h)
    nu = tw_compose(f, rho_g)
    phi = tw_add(f, tw_compose(f, rho_h))
    psi = tw_add(g, tw_compose(h, rho_g))
    H = tw_add(h, tw_compose(h, rho_h))

    q = {}
    for k in range(1, N):
        c = nu.component(-k, 0)
        if c is not None:
            q[k + 1] = c
    Qmod = AInfModule(r.Q, mod.algebra, q, N, mod.side, name=None if mod.name is None else f"{mod.name}_transferred")
    return TransferResult(
        Qmod,
        read_back(phi, mod, Qmod, N),
        read_back(psi, Qmod, mod, N),
        read_back(H, mod, mod, N),
        N,
    )


def _first_nonzero(F: TwistedMorphism, cells) -> Optional[Tuple[int, int]]:
    keep = set(cells)
    for s in cells:
        for t in F.targets(s):
            if t in keep:
                return (s, t)
    return None


def _cell_witness(check: str, cell: Tuple[int, int]) -> Report:
    s, t = cell
    return Report.failed({"check": check, "i": s, "j": t, "word_length": 1 - s, "target_word_length": 1 - t})


def verify_transfer(mod: AInfModule, r: RetractData, result: TransferResult, N: int) -> Report:
    """Module axioms for q, the extension clauses, closedness of phi and psi, and d(H) = psi phi - id."""
    report = _verify(mod, r, result, N)
    report.window = [1, N]
    return report


def _verify(mod: AInfModule, r: RetractData, result: TransferResult, N: int) -> Report:
    cells = stasheff_window(N)
    mod_report = is_module(result.module, N)
    if not mod_report.ok:
        return Report.failed({"check": "module", **mod_report.witness})
    for name, m, first in (("phi", result.phi, r.f), ("psi", result.psi, r.g), ("H", result.H, r.h)):
        if m.degree != first.degree:
            return Report.failed({"check": f"{name}_degree", "degree": m.degree})
        c1 = m.comp(1)
        if (c1 is None and not first.is_zero) or (c1 is not None and not gmap_equal(c1, first)):
            return Report.failed({"check": f"{name}_extends", "arity": 1})
    phi_bar = bar_mod_morphism(result.phi)
    psi_bar = bar_mod_morphism(result.psi)
    for name, m in (("phi_closed", phi_bar), ("psi_closed", psi_bar)):
        cell = _first_nonzero(tw_diff(m), cells)
        if cell is not None:
            return _cell_witness(name, cell)
    lhs = tw_diff(bar_mod_morphism(result.H))
    rhs = tw_sub(tw_compose(psi_bar, phi_bar), tw_identity(mod.bar))
    cell = tw_first_difference(lhs, rhs, cells)
    if cell is not None:
        return _cell_witness("homotopy", cell)
    return Report()


def check_rho_identity(mod: AInfModule, r: RetractData, N: int) -> Report:
    """d(rho) = -rho g f rho on the bar of P without structure."""
    data = bar_data(mod, r)
    rho = rho_bar(data)
    lhs = tw_diff(rho)
    rhs = tw_scale(-1, tw_compose(rho, tw_compose(data.g, tw_compose(data.f, rho))))
    cell = tw_first_difference(lhs, rhs, stasheff_window(N))
    report = Report() if cell is None else _cell_witness("rho", cell)
    report.window = [1, N]
    return report


def truncation_agrees(a: TransferResult, b: TransferResult) -> bool:
    """Shared arities of two transfers of the same data coincide."""
    top = min(a.N, b.N)
    for x, y in ((a.module.p, b.module.p), (a.phi.f, b.phi.f), (a.psi.f, b.psi.f), (a.H.f, b.H.f)):
        for i in range(1, top + 1):
            u, v = x.get(i), y.get(i)
            if (u is None) != (v is None):
                return False
            if u is not None and not gmap_equal(u, v):
                return False
    return True

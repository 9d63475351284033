"""Homotopy retracts, and the standard retract of a complex onto its homology."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .complexes import Complex, hom_diff, zero_differential
from .errors import PreconditionError, StructuralError
from .graded import (
    GradedMap,
    GradedSpace,
    dm_entries,
    gmap_add,
    gmap_compose,
    gmap_from_entries,
    gmap_scale,
    gmap_zero,
)
from .linalg import Column, extend_basis, hstack, identity_columns, kernel


@dataclass(frozen=True, eq=False)
class RetractData:
    """f: P -> Q and g: Q -> P closed of degree 0, h: P -> P of degree -1, with g f = id + d(h)."""

    P: Complex
    Q: Complex
    f: GradedMap
    g: GradedMap
    h: GradedMap


def retract_residual(r: RetractData) -> GradedMap:
    """g f - id - d(h); zero exactly for a valid retract."""
    gf = gmap_compose(r.g, r.f)
    return gmap_add(gmap_add(gf, gmap_scale(-1, r.P.identity)), gmap_scale(-1, hom_diff(r.h, r.P, r.P)))


def check_retract(r: RetractData) -> None:
    for name, m, src, tgt, deg in (("f", r.f, r.P, r.Q, 0), ("g", r.g, r.Q, r.P, 0), ("h", r.h, r.P, r.P, -1)):
        if m.source != src.space or m.target != tgt.space or m.degree != deg:
            raise StructuralError(f"retract map {name} has the wrong shape or degree")
    for name, m, src, tgt in (("f", r.f, r.P, r.Q), ("g", r.g, r.Q, r.P)):
        dm = hom_diff(m, src, tgt)
        if not dm.is_zero:
            raise PreconditionError(f"retract map {name} is not closed", residual=dm,
                                    witness={"map": name, "degrees": sorted(dm.blocks)})
    res = retract_residual(r)
    if not res.is_zero:
        raise PreconditionError("g f differs from id + d(h)", residual=res,
                                witness={"degrees": sorted(res.blocks)})


def trivial_retract(P: Complex) -> RetractData:
    """f = g = id, h = 0."""
    return RetractData(P, P, P.identity, P.identity, gmap_zero(P.space, P.space, -1, P.field))


def homology_retract(P: Complex) -> RetractData:
    """Retract onto homology: each degree split as image + homology + complement of the cycles."""
    field = P.field
    degrees = P.space.degrees
    comp_prev: List[Column] = []
    prev_deg = None
    f_entries: Dict[int, Dict[Tuple[int, int], object]] = {}
    g_entries: Dict[int, Dict[Tuple[int, int], object]] = {}
    h_entries: Dict[int, Dict[Tuple[int, int], object]] = {}
    q_dims: Dict[int, int] = {}
    for n in degrees:
        size = P.space.dim(n)
        cycles = kernel(P.d.block(n), field)
        if prev_deg != n - 1:
            comp_prev = []
        dprev = P.d.block(n - 1)
        bounds = [dprev * c for c in comp_prev]
        homology = extend_basis(bounds, cycles, size, field)
        complement = extend_basis(cycles, identity_columns(size, field), size, field)
        S = hstack(bounds + homology + complement, size, field)
        Sinv = S.to_dense().inv().to_sparse()
        nb, nh = len(bounds), len(homology)
        q_dims[n] = nh
        for i, j, v in dm_entries(Sinv):
            if nb <= i < nb + nh:
                f_entries.setdefault(n, {})[(i - nb, j)] = v
            elif i < nb:
                # h0 sends the i-th boundary back to the complement vector it came from
                for row, _, w in dm_entries(comp_prev[i]):
                    cell = h_entries.setdefault(n, {})
                    cell[(row, j)] = cell.get((row, j), field.zero) - w * v
        for col, c in enumerate(homology):
            for row, _, v in dm_entries(c):
                g_entries.setdefault(n, {})[(row, col)] = v
        comp_prev = complement
        prev_deg = n
    Qspace = GradedSpace.of(q_dims)
    Q = zero_differential(Qspace, field)
    f = gmap_from_entries(P.space, Qspace, 0, f_entries, field)
    g = gmap_from_entries(Qspace, P.space, 0, g_entries, field)
    h = gmap_from_entries(P.space, P.space, -1, h_entries, field)
    return RetractData(P, Q, f, g, h)

"""Finite DG quivers: small DG categories presented by hom complexes and a composition map.

An element of hom(a, b) of degree n is stored as a degree-n map k -> hom(a, b),
so every identity below is an identity of graded maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

from .complexes import Complex, atomic, hom_complex, tensor, tensor_map, unit_complex, unitor
from .errors import StructuralError
from .field import Field
from .graded import (
    GradedMap,
    basis,
    dm_entries,
    gmap,
    gmap_add,
    gmap_compose,
    gmap_equal,
    gmap_from_entries,
    gmap_identity,
    gmap_scale,
    gmap_zero,
    tensor_spaces,
)
from .report import Report

Triple = Tuple[str, str, str]


@dataclass(frozen=True, eq=False)
class DGQuiver:
    """``comp[(a, b, c)]`` is a degree-0 map hom(b, c) x hom(a, b) -> hom(a, c)."""

    objects: Tuple[str, ...]
    homs: Mapping[Tuple[str, str], Complex]
    comp: Mapping[Triple, GradedMap]
    units: Mapping[str, GradedMap]
    field: Field

    def hom(self, a: str, b: str) -> Complex:
        try:
            return self.homs[(a, b)]
        except KeyError:
            raise StructuralError(f"quiver has no hom({a}, {b})") from None


def make_quiver(objects: Sequence[str], homs: Mapping[Tuple[str, str], Complex],
                comp: Mapping[Triple, GradedMap], units: Mapping[str, GradedMap],
                field: Field) -> DGQuiver:
    homs = {k: atomic(v) for k, v in homs.items()}
    for a in objects:
        for b in objects:
            if (a, b) not in homs:
                raise StructuralError(f"missing hom({a}, {b})")
    for (a, b, c), m in comp.items():
        src = tensor_spaces(homs[(b, c)].space, homs[(a, b)].space)
        if m.degree != 0 or m.source != src or m.target != homs[(a, c)].space:
            raise StructuralError(f"composition {a}->{b}->{c} has the wrong shape or degree")
    for a, u in units.items():
        if u.degree != 0 or u.target != homs[(a, a)].space:
            raise StructuralError(f"unit of {a} is not a degree 0 element of hom({a}, {a})")
    return DGQuiver(tuple(objects), homs, dict(comp), dict(units), field)


def _element_pair(g: GradedMap, f: GradedMap) -> GradedMap:
    """g x f as a map k -> hom x hom; no Koszul sign appears on k x k."""
    t = tensor_map(g, f)
    k = unit_complex(g.field).space
    return gmap(k, t.target, t.degree, t.blocks, t.field)


def quiver_compose(Q: DGQuiver, a: str, b: str, c: str, g: GradedMap, f: GradedMap) -> GradedMap:
    return gmap_compose(Q.comp[(a, b, c)], _element_pair(g, f))


def _witness(identity: str, objects: Sequence[str], residual: GradedMap) -> Dict[str, Any]:
    return {"identity": identity, "objects": list(objects), "basis": sorted(residual.blocks)}


def check_dg_quiver(Q: DGQuiver) -> Report:
    """d^2, Leibniz, associativity and unit laws, in that order; first violation wins."""
    obs = Q.objects
    for a in obs:
        for b in obs:
            H = Q.hom(a, b)
            dd = gmap_compose(H.d, H.d)
            if not dd.is_zero:
                return Report.failed(_witness("d_squared", [a, b], dd))
    for (a, b, c), m in sorted(Q.comp.items()):
        src = tensor(Q.hom(b, c), Q.hom(a, b))
        tgt = Q.hom(a, c)
        res = gmap_add(gmap_compose(tgt.d, m), gmap_scale(-1, gmap_compose(m, src.d)))
        if not res.is_zero:
            return Report.failed(_witness("leibniz", [a, b, c], res))
    for a in obs:
        for b in obs:
            for c in obs:
                for d in obs:
                    keys = [(a, b, d), (b, c, d), (a, c, d), (a, b, c)]
                    if not all(k in Q.comp for k in keys):
                        continue
                    ids = {(x, y): gmap_identity(Q.hom(x, y).space, Q.field) for x, y in [(a, b), (c, d)]}
                    left = gmap_compose(Q.comp[(a, b, d)], tensor_map(Q.comp[(b, c, d)], ids[(a, b)]))
                    right = gmap_compose(Q.comp[(a, c, d)], tensor_map(ids[(c, d)], Q.comp[(a, b, c)]))
                    res = gmap_add(left, gmap_scale(-1, right))
                    if not res.is_zero:
                        return Report.failed(_witness("associativity", [a, b, c, d], res))
    for a, u in sorted(Q.units.items()):
        dU = gmap_compose(Q.hom(a, a).d, u)
        if not dU.is_zero:
            return Report.failed(_witness("unit_closed", [a], dU))
        for b in obs:
            H = Q.hom(a, b)
            if (a, a, b) in Q.comp:
                right = gmap_compose(Q.comp[(a, a, b)], tensor_map(H.identity, u))
                res = gmap_add(right, gmap_scale(-1, unitor(H)))
                if not res.is_zero:
                    return Report.failed(_witness("right_unit", [a, b], res))
            H = Q.hom(b, a)
            if (b, a, a) in Q.comp:
                left = gmap_compose(Q.comp[(b, a, a)], tensor_map(u, H.identity))
                lunit = gmap(left.source, H.space, 0, gmap_identity(H.space, Q.field).blocks, Q.field)
                res = gmap_add(left, gmap_scale(-1, lunit))
                if not res.is_zero:
                    return Report.failed(_witness("left_unit", [b, a], res))
    return Report()


def quiver_of_complexes(complexes: Mapping[str, Complex], field: Optional[Field] = None) -> DGQuiver:
    """The full DG subcategory of Ch on the given complexes."""
    names = tuple(complexes)
    if not names:
        raise StructuralError("a quiver needs at least one object")
    field = field or complexes[names[0]].field
    H = {(a, b): hom_complex(complexes[a], complexes[b]) for a in names for b in names}
    comp: Dict[Triple, GradedMap] = {}
    for a in names:
        for b in names:
            for c in names:
                hbc, hab, hac = H[(b, c)], H[(a, b)], H[(a, c)]
                src = tensor_spaces(hbc.complex.space, hab.complex.space)
                entries: Dict[int, Dict[Tuple[int, int], Any]] = {}
                for n in src.degrees:
                    if not hac.complex.space.dim(n):
                        continue
                    for col, key in enumerate(basis(src, n)):
                        (p, i), (q, j) = key
                        image = hac.encode(gmap_compose(hbc.basis_map(p, i), hab.basis_map(q, j)))
                        for row, _, v in dm_entries(image):
                            entries.setdefault(n, {})[(row, col)] = v
                comp[(a, b, c)] = gmap_from_entries(src, hac.complex.space, 0, entries, field)
    units = {}
    k = unit_complex(field).space
    for a in names:
        vec = H[(a, a)].encode(complexes[a].identity)
        units[a] = gmap_from_entries(k, H[(a, a)].complex.space, 0,
                                     {0: {(r, 0): v for r, _, v in dm_entries(vec)}}, field)
    return make_quiver(names, {key: h.complex for key, h in H.items()}, comp, units, field)


# ---------- the quiver as a DG category ----------

@dataclass(frozen=True, eq=False)
class QuiverElement:
    source: str
    target: str
    vec: GradedMap

    @property
    def degree(self) -> int:
        return self.vec.degree


def quiver_element(Q: DGQuiver, a: str, b: str, degree: int, coords: Mapping[int, Any]) -> QuiverElement:
    """Element of hom(a, b) of the given degree from {basis index: scalar}."""
    H = Q.hom(a, b)
    k = unit_complex(Q.field).space
    vec = gmap_from_entries(k, H.space, degree, {0: {(i, 0): v for i, v in coords.items()}}, Q.field)
    return QuiverElement(a, b, vec)


class QuiverCategory:
    name = "quiver"

    def __init__(self, quiver: DGQuiver) -> None:
        self.quiver = quiver
        self.field = quiver.field

    def degree(self, f: QuiverElement) -> int:
        return f.degree

    def compose(self, g: QuiverElement, f: QuiverElement) -> QuiverElement:
        if f.target != g.source:
            raise StructuralError(f"cannot compose {f.source}->{f.target} with {g.source}->{g.target}")
        return QuiverElement(f.source, g.target,
                             quiver_compose(self.quiver, f.source, f.target, g.target, g.vec, f.vec))

    def diff(self, f: QuiverElement, source=None, target=None) -> QuiverElement:
        H = self.quiver.hom(f.source, f.target)
        return QuiverElement(f.source, f.target, gmap_compose(H.d, f.vec))

    def add(self, f: QuiverElement, g: QuiverElement) -> QuiverElement:
        if (f.source, f.target) != (g.source, g.target):
            raise StructuralError("cannot add elements of different hom complexes")
        return QuiverElement(f.source, f.target, gmap_add(f.vec, g.vec))

    def scale(self, c, f: QuiverElement) -> QuiverElement:
        return QuiverElement(f.source, f.target, gmap_scale(c, f.vec))

    def is_zero(self, f: QuiverElement) -> bool:
        return f.vec.is_zero

    def equal(self, f: QuiverElement, g: QuiverElement) -> bool:
        return (f.source, f.target) == (g.source, g.target) and gmap_equal(f.vec, g.vec)

    def identity(self, a: str) -> QuiverElement:
        return QuiverElement(a, a, self.quiver.units[a])

    def zero(self, a: str, b: str, degree: int) -> QuiverElement:
        k = unit_complex(self.field).space
        return QuiverElement(a, b, gmap_zero(k, self.quiver.hom(a, b).space, degree, self.field))

    def same_object(self, a: str, b: str) -> bool:
        return a == b

    def describe(self, f: QuiverElement) -> Dict[str, Any]:
        return {"degree": f.degree, "hom": [f.source, f.target], "support": [r for _, r, _, _ in f.vec.nonzero_entries()]}

"""The DG category interface the twisted engine works over, and Ch itself.

Morphisms never carry their differential context, so ``diff`` takes the
source and target objects explicitly. ``None`` stands for a zero morphism
wherever the engine stores components.
"""

from __future__ import annotations

from typing import Any, Dict, Optional, Protocol

from .complexes import Complex, complex_equal, hom_diff
from .field import Field
from .graded import GradedMap, gmap_add, gmap_compose, gmap_equal, gmap_scale, gmap_zero


class DGCategory(Protocol):
    field: Field

    def degree(self, f) -> int: ...

    def compose(self, g, f): ...

    def diff(self, f, source, target): ...

    def add(self, f, g): ...

    def scale(self, c, f): ...

    def is_zero(self, f) -> bool: ...

    def equal(self, f, g) -> bool: ...

    def identity(self, obj): ...

    def zero(self, source, target, degree: int): ...

    def same_object(self, a, b) -> bool: ...

    def describe(self, f) -> Dict[str, Any]: ...


class ChCategory:
    """Complexes and graded maps."""

    name = "ch"

    def __init__(self, field: Field) -> None:
        self.field = field

    def degree(self, f: GradedMap) -> int:
        return f.degree

    def compose(self, g: GradedMap, f: GradedMap) -> GradedMap:
        return gmap_compose(g, f)

    def diff(self, f: GradedMap, source: Complex, target: Complex) -> GradedMap:
        return hom_diff(f, source, target)

    def add(self, f: GradedMap, g: GradedMap) -> GradedMap:
        return gmap_add(f, g)

    def scale(self, c, f: GradedMap) -> GradedMap:
        return gmap_scale(c, f)

    def is_zero(self, f: GradedMap) -> bool:
        return f.is_zero

    def equal(self, f: GradedMap, g: GradedMap) -> bool:
        return gmap_equal(f, g)

    def identity(self, obj: Complex) -> GradedMap:
        return obj.identity

    def zero(self, source: Complex, target: Complex, degree: int) -> GradedMap:
        return gmap_zero(source.space, target.space, degree, self.field)

    def same_object(self, a: Complex, b: Complex) -> bool:
        return a is b or complex_equal(a, b)

    def describe(self, f: GradedMap) -> Dict[str, Any]:
        return {"degree": f.degree, "residual_degrees": sorted(f.blocks)}


def acc(cat, total: Optional[Any], term: Optional[Any]) -> Optional[Any]:
    """Sum where None means zero."""
    if term is None:
        return total
    if total is None:
        return term
    return cat.add(total, term)


def normalize(cat, f: Optional[Any]) -> Optional[Any]:
    if f is None or cat.is_zero(f):
        return None
    return f

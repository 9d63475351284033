"""Twisted complexes over a DG category, bounded or streamed, and their convolution.

Conventions (psi convention for shifts):
  - alpha_ij has degree w(i) - w(j) + 1, where w is the index weight;
  - the twisted condition at (i, j) is (-1)^{w(j)} d alpha_ij + sum_k alpha_kj alpha_ik = 0;
  - a degree-n morphism has components f_ij of degree n + w(i) - w(j), and
      (df)_kl = (-1)^{w(l)} d f_kl + sum_m beta_ml f_km - (-1)^n sum_m f_ml alpha_km;
  - composition is (g f)_ik = sum_j g_jk f_ij, with no extra signs.
The convolution is the sum of the a_i[-w(i)] with natural differential
(-1)^{w(i)} d, perturbed by the alpha's.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from .categories import ChCategory, acc, normalize
from .complexes import (
    Complex,
    DirectSum,
    direct_sum,
    perturb,
    shift_map,
    suspend,
    truncate_degrees,
)
from .errors import InstabilityError, PreconditionError, StructuralError, SupportError
from .graded import GradedMap, gmap_from_entries, sign
from .pool import cell_map
from .report import Report

Index = Hashable
Clean = Optional[Tuple[Optional[int], Optional[int]]]


def jsonable(idx: Index) -> Any:
    return list(idx) if isinstance(idx, tuple) else idx


def _neg(idx: Index) -> Any:
    return tuple(-v for v in idx) if isinstance(idx, tuple) else -idx


class TwistedBase:
    """Objects a_i and arrows alpha_ij, generated on demand and memoized.

    Subclasses fix the index shape through :meth:`weight` and :meth:`cells`.
    """

    kind = "twisted"

    def __init__(
        self,
        category,
        object_fn: Callable[[Index], Any],
        arrow_fn: Callable[[Index, Index], Any],
        reach_fn: Callable[[Index], Iterable[Index]],
        *,
        streamed: bool,
        one_sided: Optional[bool] = None,
        clean: Optional[Callable[[int, int], Clean]] = None,
        name: Optional[str] = None,
    ) -> None:
        self.category = category
        self.streamed = streamed
        self.name = name
        self._object_fn = object_fn
        self._arrow_fn = arrow_fn
        self._reach_fn = reach_fn
        self._declared_one_sided = one_sided
        self._clean = clean
        self._lock = threading.Lock()
        self._objects: Dict[Index, Any] = {}
        self._arrows: Dict[Tuple[Index, Index], Any] = {}
        self._targets: Dict[Index, Tuple[Index, ...]] = {}

    @staticmethod
    def weight(idx: Index) -> int:
        raise NotImplementedError

    def obj(self, i: Index):
        return _memo(self._lock, self._objects, i, lambda: self._object_fn(i))

    def arrow(self, i: Index, j: Index):
        def compute():
            if self.obj(i) is None or self.obj(j) is None:
                return None
            return normalize(self.category, self._arrow_fn(i, j))

        return _memo(self._lock, self._arrows, (i, j), compute)

    def targets(self, i: Index) -> Tuple[Index, ...]:
        def compute():
            if self.obj(i) is None:
                return ()
            cands = sorted(set(self._reach_fn(i)), key=_sort_key)
            return tuple(j for j in cands if self.arrow(i, j) is not None)

        return _memo(self._lock, self._targets, i, compute)

    def arrow_degree(self, i: Index, j: Index) -> int:
        return self.weight(i) - self.weight(j) + 1

    def order_key(self, pair: Tuple[Index, Index]):
        i, j = pair
        return (abs(self.weight(j) - self.weight(i)), _neg(i), _neg(j))

    def check_degrees(self, cells: Sequence[Index]) -> None:
        for i in cells:
            for j in self.targets(i):
                got = self.category.degree(self.arrow(i, j))
                if got != self.arrow_degree(i, j):
                    raise StructuralError(
                        f"arrow {jsonable(i)}->{jsonable(j)} has degree {got}, expected {self.arrow_degree(i, j)}",
                        witness={"i": jsonable(i), "j": jsonable(j)},
                    )

    def clean_degrees(self, *window) -> Clean:
        """Total degrees no object outside the window reaches; (None, None) when bounded."""
        if not self.streamed:
            return (None, None)
        if self._clean is None:
            raise SupportError("streamed complex carries no degree certificate")
        return self._clean(*window)

    def cells(self, *window) -> List[Index]:
        raise NotImplementedError


def _sort_key(idx: Index):
    return idx if isinstance(idx, tuple) else (idx,)


def _memo(lock: threading.Lock, table: Dict, key, compute: Callable[[], Any]):
    """Cached value for ``key``; computed outside the lock, first stored value wins."""
    with lock:
        if key in table:
            return table[key]
    value = compute()
    with lock:
        return table.setdefault(key, value)


class TwistedComplex(TwistedBase):
    """Integer-indexed twisted complex; bounds are the index support (None = unbounded)."""

    def __init__(self, category, object_fn, arrow_fn, reach_fn, *, lo: Optional[int], hi: Optional[int],
                 streamed: bool, **kw) -> None:
        super().__init__(category, object_fn, arrow_fn, reach_fn, streamed=streamed, **kw)
        self.lo = lo
        self.hi = hi

    @staticmethod
    def weight(idx: int) -> int:
        return idx

    @classmethod
    def bounded(cls, category, objects: Dict[int, Any], diffs: Dict[Tuple[int, int], Any],
                name: Optional[str] = None) -> "TwistedComplex":
        objects = {int(i): a for i, a in objects.items() if a is not None}
        by_source: Dict[int, Dict[int, Any]] = {}
        for (i, j), a in diffs.items():
            if i not in objects or j not in objects:
                raise StructuralError(f"arrow {i}->{j} touches an absent object")
            if category.degree(a) != i - j + 1:
                raise StructuralError(
                    f"arrow {i}->{j} has degree {category.degree(a)}, expected {i - j + 1}",
                    witness={"i": i, "j": j},
                )
            by_source.setdefault(i, {})[j] = a
        lo = min(objects) if objects else 0
        hi = max(objects) if objects else -1
        return cls(
            category,
            objects.get,
            lambda i, j: by_source.get(i, {}).get(j),
            lambda i: by_source.get(i, {}).keys(),
            lo=lo,
            hi=hi,
            streamed=False,
            name=name,
        )

    @classmethod
    def streamed_from(cls, category, object_fn, arrow_fn, reach_fn, *, lo=None, hi=None,
                      one_sided=None, clean=None, name=None) -> "TwistedComplex":
        return cls(category, object_fn, arrow_fn, reach_fn, lo=lo, hi=hi, streamed=True,
                   one_sided=one_sided, clean=clean, name=name)

    @classmethod
    def trivial(cls, category, obj, index: int = 0) -> "TwistedComplex":
        return cls.bounded(category, {index: obj}, {})

    @property
    def is_bounded(self) -> bool:
        return self.lo is not None and self.hi is not None

    def cells(self, lo: Optional[int] = None, hi: Optional[int] = None) -> List[int]:
        lo = self.lo if lo is None else max(lo, self.lo) if self.lo is not None else lo
        hi = self.hi if hi is None else min(hi, self.hi) if self.hi is not None else hi
        if lo is None or hi is None:
            raise SupportError("an unbounded complex needs an explicit window")
        return [i for i in range(lo, hi + 1) if self.obj(i) is not None]

    def bounded_arrows(self) -> Dict[Tuple[int, int], Any]:
        return {(i, j): self.arrow(i, j) for i in self.cells() for j in self.targets(i)}


# ---------- morphisms ----------

class TwistedMorphism:
    """Components f_ij, explicit or generated lazily from other morphisms."""

    def __init__(self, source: TwistedBase, target: TwistedBase, degree: int,
                 component_fn: Callable[[Index, Index], Any],
                 targets_fn: Callable[[Index], Iterable[Index]]) -> None:
        self.source = source
        self.target = target
        self.degree = degree
        self._component_fn = component_fn
        self._targets_fn = targets_fn
        self._lock = threading.Lock()
        self._components: Dict[Tuple[Index, Index], Any] = {}
        self._targets: Dict[Index, Tuple[Index, ...]] = {}

    @property
    def category(self):
        return self.source.category

    @classmethod
    def bounded(cls, source: TwistedBase, target: TwistedBase, degree: int,
                components: Dict[Tuple[Index, Index], Any]) -> "TwistedMorphism":
        by_source: Dict[Index, Dict[Index, Any]] = {}
        for (i, j), f in components.items():
            want = degree + source.weight(i) - target.weight(j)
            if source.category.degree(f) != want:
                raise StructuralError(
                    f"component {jsonable(i)}->{jsonable(j)} has degree {source.category.degree(f)}, expected {want}"
                )
            by_source.setdefault(i, {})[j] = f
        return cls(source, target, degree,
                   lambda i, j: by_source.get(i, {}).get(j),
                   lambda i: by_source.get(i, {}).keys())

    def component(self, i: Index, j: Index):
        def compute():
            if self.source.obj(i) is None or self.target.obj(j) is None:
                return None
            return normalize(self.category, self._component_fn(i, j))

        return _memo(self._lock, self._components, (i, j), compute)

    def targets(self, i: Index) -> Tuple[Index, ...]:
        def compute():
            if self.source.obj(i) is None:
                return ()
            cands = sorted(set(self._targets_fn(i)), key=_sort_key)
            return tuple(j for j in cands if self.component(i, j) is not None)

        return _memo(self._lock, self._targets, i, compute)

    def components_on(self, cells: Sequence[Index]) -> Dict[Tuple[Index, Index], Any]:
        keep = set(cells)
        return {(i, j): self.component(i, j) for i in cells for j in self.targets(i) if j in keep}


def tw_zero(source: TwistedBase, target: TwistedBase, degree: int) -> TwistedMorphism:
    return TwistedMorphism(source, target, degree, lambda i, j: None, lambda i: ())


def tw_identity(T: TwistedBase) -> TwistedMorphism:
    cat = T.category
    return TwistedMorphism(T, T, 0, lambda i, j: cat.identity(T.obj(i)) if i == j else None, lambda i: (i,))


def tw_add(f: TwistedMorphism, g: TwistedMorphism) -> TwistedMorphism:
    if f.degree != g.degree:
        raise StructuralError(f"cannot add twisted morphisms of degrees {f.degree} and {g.degree}")
    cat = f.category
    return TwistedMorphism(
        f.source, f.target, f.degree,
        lambda i, j: acc(cat, f.component(i, j), g.component(i, j)),
        lambda i: set(f.targets(i)) | set(g.targets(i)),
    )


def tw_scale(c, f: TwistedMorphism) -> TwistedMorphism:
    cat = f.category
    return TwistedMorphism(
        f.source, f.target, f.degree,
        lambda i, j: None if f.component(i, j) is None else cat.scale(c, f.component(i, j)),
        f.targets,
    )


def tw_sub(f: TwistedMorphism, g: TwistedMorphism) -> TwistedMorphism:
    return tw_add(f, tw_scale(-1, g))


def tw_compose(g: TwistedMorphism, f: TwistedMorphism) -> TwistedMorphism:
    """(g f)_ik = sum_j g_jk f_ij."""
    cat = f.category

    def comp(i, k):
        total = None
        for j in f.targets(i):
            gjk = g.component(j, k)
            if gjk is not None:
                total = acc(cat, total, cat.compose(gjk, f.component(i, j)))
        return total

    def cands(i):
        out = set()
        for j in f.targets(i):
            out.update(g.targets(j))
        return out

    return TwistedMorphism(f.source, g.target, f.degree + g.degree, comp, cands)


def tw_diff(f: TwistedMorphism) -> TwistedMorphism:
    """The twisted hom differential; squares to zero when source and target are valid."""
    T, S, n = f.source, f.target, f.degree
    cat = f.category

    def comp(k, l):
        total = None
        fkl = f.component(k, l)
        if fkl is not None:
            total = cat.scale(sign(S.weight(l)), cat.diff(fkl, T.obj(k), S.obj(l)))
        for m in f.targets(k):
            beta = S.arrow(m, l)
            if beta is not None:
                total = acc(cat, total, cat.compose(beta, f.component(k, m)))
        for m in T.targets(k):
            fml = f.component(m, l)
            if fml is not None:
                total = acc(cat, total, cat.scale(-sign(n), cat.compose(fml, T.arrow(k, m))))
        return total

    def cands(k):
        out = set(f.targets(k))
        for m in f.targets(k):
            out.update(S.targets(m))
        for m in T.targets(k):
            out.update(f.targets(m))
        return out

    return TwistedMorphism(T, S, n + 1, comp, cands)


def tw_first_difference(f: TwistedMorphism, g: TwistedMorphism, cells: Sequence[Index],
                        target_cells: Optional[Sequence[Index]] = None) -> Optional[Tuple[Index, Index]]:
    """First (i, j) on the window where f and g differ, or None."""
    cat = f.category
    if f.degree != g.degree:
        return (cells[0], cells[0]) if cells else None
    tcells = list(cells if target_cells is None else target_cells)
    for i in cells:
        for j in tcells:
            a, b = f.component(i, j), g.component(i, j)
            if a is None and b is None:
                continue
            if a is None or b is None or not cat.equal(a, b):
                return (i, j)
    return None


def tw_equal(f: TwistedMorphism, g: TwistedMorphism, cells: Sequence[Index],
             target_cells: Optional[Sequence[Index]] = None) -> bool:
    return f.degree == g.degree and tw_first_difference(f, g, cells, target_cells) is None


def tw_is_zero(f: TwistedMorphism, cells: Sequence[Index], target_cells: Optional[Sequence[Index]] = None) -> bool:
    keep = set(cells if target_cells is None else target_cells)
    return all(j not in keep for i in cells for j in f.targets(i))


# ---------- the twisted condition ----------

def twisted_residual(T: TwistedBase, i: Index, j: Index):
    """(-1)^{w(j)} d alpha_ij + sum_k alpha_kj alpha_ik, or None when it vanishes."""
    cat = T.category
    total = None
    a = T.arrow(i, j)
    if a is not None:
        total = cat.scale(sign(T.weight(j)), cat.diff(a, T.obj(i), T.obj(j)))
    for k in T.targets(i):
        b = T.arrow(k, j)
        if b is not None:
            total = acc(cat, total, cat.compose(b, T.arrow(i, k)))
    return normalize(cat, total)


def check_twisted(T: TwistedBase, cells: Sequence[Index]) -> Report:
    T.check_degrees(cells)
    pairs = sorted(((i, j) for i in cells for j in cells), key=T.order_key)
    results = cell_map(lambda p: twisted_residual(T, *p), pairs)
    for (i, j), res in zip(pairs, results):
        if res is not None:
            witness = {"i": jsonable(i), "j": jsonable(j)}
            witness.update(T.category.describe(res))
            return Report.failed(witness)
    return Report()


def classify(T: TwistedComplex) -> Dict[str, bool]:
    flags = {
        "bounded": T.lo is not None and T.hi is not None,
        "bounded_above": T.hi is not None,
        "bounded_below": T.lo is not None,
    }
    if T._declared_one_sided is not None:
        flags["one_sided"] = T._declared_one_sided
    elif flags["bounded"]:
        flags["one_sided"] = all(j > i for i in T.cells() for j in T.targets(i))
    else:
        flags["one_sided"] = False
    return flags


def truncate(T: TwistedComplex, lo: int, hi: int) -> TwistedComplex:
    """The bounded complex of objects and arrows inside [lo, hi]."""
    cells = T.cells(lo, hi)
    objects = {i: T.obj(i) for i in cells}
    diffs = {(i, j): T.arrow(i, j) for i in cells for j in T.targets(i) if lo <= j <= hi}
    return TwistedComplex.bounded(T.category, objects, diffs, name=T.name)


# ---------- the DG category of twisted complexes ----------

class TwistedCategory:
    """Twisted complexes over ``base`` as a DG category.

    Zero tests and equality need finitely many cells; streamed objects are
    evaluated on ``window``.
    """

    name = "twisted"

    def __init__(self, base, window: Optional[Tuple[Any, ...]] = None) -> None:
        self.base = base
        self.field = base.field
        self.window = window

    def cells_of(self, T: TwistedBase) -> List[Index]:
        if T.streamed:
            if self.window is None:
                raise SupportError("streamed objects need an evaluation window")
            return T.cells(*self.window)
        return T.cells()

    def degree(self, f: TwistedMorphism) -> int:
        return f.degree

    def compose(self, g: TwistedMorphism, f: TwistedMorphism) -> TwistedMorphism:
        return tw_compose(g, f)

    def diff(self, f: TwistedMorphism, source=None, target=None) -> TwistedMorphism:
        return tw_diff(f)

    def add(self, f: TwistedMorphism, g: TwistedMorphism) -> TwistedMorphism:
        return tw_add(f, g)

    def scale(self, c, f: TwistedMorphism) -> TwistedMorphism:
        return tw_scale(c, f)

    def is_zero(self, f: TwistedMorphism) -> bool:
        return tw_is_zero(f, self.cells_of(f.source), self.cells_of(f.target))

    def equal(self, f: TwistedMorphism, g: TwistedMorphism) -> bool:
        return tw_equal(f, g, self.cells_of(f.source), self.cells_of(f.target))

    def identity(self, T: TwistedBase) -> TwistedMorphism:
        return tw_identity(T)

    def zero(self, source: TwistedBase, target: TwistedBase, degree: int) -> TwistedMorphism:
        return tw_zero(source, target, degree)

    def same_object(self, a: TwistedBase, b: TwistedBase) -> bool:
        if a is b:
            return True
        ca, cb = self.cells_of(a), self.cells_of(b)
        if ca != cb or not all(self.base.same_object(a.obj(i), b.obj(i)) for i in ca):
            return False
        for i in ca:
            if a.targets(i) != b.targets(i):
                return False
            if not all(self.base.equal(a.arrow(i, j), b.arrow(i, j)) for j in a.targets(i)):
                return False
        return True

    def describe(self, f: TwistedMorphism) -> Dict[str, Any]:
        src, tgt = self.cells_of(f.source), set(self.cells_of(f.target))
        comps = [[jsonable(i), jsonable(j)] for i in src for j in f.targets(i) if j in tgt]
        return {"degree": f.degree, "components": comps}


# ---------- convolution ----------

@dataclass(frozen=True, eq=False)
class Convolution:
    """The convolution of a twisted complex over Ch on a list of cells."""

    complex: Complex
    cells: Tuple[Index, ...]
    sum: DirectSum
    weights: Tuple[int, ...]
    degrees: Tuple[Optional[int], Optional[int]] = (None, None)

    def index(self, cell: Index) -> int:
        return self.cells.index(cell)

    def locate(self, n: int, pos: int) -> Tuple[int, int]:
        """(summand number, position inside the summand) of basis element ``pos`` in degree n."""
        best = None
        for k, S in enumerate(self.sum.summands):
            if S.space.dim(n) == 0:
                continue
            off = self.sum.offsets[(k, n)]
            if off <= pos < off + S.space.dim(n):
                best = (k, pos - off)
                break
        if best is None:
            raise StructuralError(f"position {pos} in degree {n} lies in no summand")
        return best

    def offset(self, k: int, n: int) -> int:
        return self.sum.offsets[(k, n)]


def _convolve_cells(T: TwistedBase, cells: Sequence[Index]) -> Convolution:
    cat = T.category
    if not isinstance(cat, ChCategory):
        raise StructuralError("convolution is defined for twisted complexes over Ch")
    cells = tuple(cells)
    weights = tuple(T.weight(c) for c in cells)
    summands = [suspend(T.obj(c), -w) for c, w in zip(cells, weights)]
    ds = direct_sum(summands, cat.field)
    position = {c: k for k, c in enumerate(cells)}
    F = None
    for i in cells:
        for j in T.targets(i):
            if j not in position:
                continue
            moved = shift_map(T.arrow(i, j), -T.weight(i), -T.weight(j))
            F = acc(cat, F, ds.embed(moved, position[i], position[j]))
    if F is None:
        C = ds.complex
    else:
        try:
            C = perturb(ds.complex, F)
        except PreconditionError as e:
            raise PreconditionError("twisted data is not a twisted complex on this window",
                                    residual=e.residual, witness=e.witness) from None
    return Convolution(C, cells, ds, weights)


def convolve(T: TwistedComplex, lo: Optional[int] = None, hi: Optional[int] = None, *,
             degrees: Optional[Tuple[int, int]] = None, check: bool = True) -> Convolution:
    """Convolution on [lo, hi]; a streamed input is cut to the degrees the window certifies."""
    cells = T.cells(lo, hi)
    if check:
        report = check_twisted(T, cells)
        if not report.ok:
            raise PreconditionError("input is not a twisted complex", witness=report.witness)
    conv = _convolve_cells(T, cells)
    if not T.streamed:
        return conv
    clean = T.clean_degrees(lo, hi)
    if clean is None:
        raise InstabilityError(f"no output degree is stable on window [{lo}, {hi}]")
    a, b = clean
    top = None if b is None else b - 1
    if degrees is not None:
        lo_d, hi_d = degrees
        if (a is not None and lo_d < a) or (top is not None and hi_d > top):
            raise InstabilityError(
                f"degrees [{lo_d}, {hi_d}] need a larger window than [{lo}, {hi}]; "
                f"stable degrees are [{a}, {top}]",
                witness={"stable": [a, top]},
            )
        a, top = lo_d, hi_d
    return Convolution(truncate_degrees(conv.complex, a, top), conv.cells, conv.sum, conv.weights, (a, top))


def convolve_morphism(f: TwistedMorphism, source: Convolution, target: Convolution) -> GradedMap:
    """The block map sum f_ij between two convolutions."""
    T, S = f.source, f.target
    entries: Dict[int, Dict[Tuple[int, int], Any]] = {}
    tpos = {c: k for k, c in enumerate(target.cells)}
    for ks, i in enumerate(source.cells):
        for j in f.targets(i):
            if j not in tpos:
                continue
            kt = tpos[j]
            moved = shift_map(f.component(i, j), -T.weight(i), -S.weight(j))
            for n, r, c, v in moved.nonzero_entries():
                row = target.offset(kt, n + moved.degree) + r
                col = source.offset(ks, n) + c
                entries.setdefault(n, {})[(row, col)] = v
    return gmap_from_entries(source.complex.space, target.complex.space, f.degree, entries,
                             source.complex.field)


def component_block(F: GradedMap, source: Convolution, i: Index, target: Convolution, j: Index,
                    source_obj: Complex, target_obj: Complex) -> GradedMap:
    """The (i, j) component of a map between convolutions, back on the unshifted objects."""
    ks, kt = source.index(i), target.index(j)
    wi, wj = source.weights[ks], target.weights[kt]
    entries: Dict[int, Dict[Tuple[int, int], Any]] = {}
    for n, r, c, v in F.nonzero_entries():
        S = source.sum.summands[ks].space
        Tt = target.sum.summands[kt].space
        if not S.dim(n) or not Tt.dim(n + F.degree):
            continue
        c0 = c - source.offset(ks, n)
        r0 = r - target.offset(kt, n + F.degree)
        if 0 <= c0 < S.dim(n) and 0 <= r0 < Tt.dim(n + F.degree):
            entries.setdefault(n - wi, {})[(r0, c0)] = v
    return gmap_from_entries(source_obj.space, target_obj.space, F.degree + wi - wj, entries, F.field)

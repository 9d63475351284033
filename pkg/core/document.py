"""The .dgj document format: named entities in one JSON object.

    {"format": 1, "field": "q",
     "spaces": {"S": {"0": 2}},
     "maps": {"d": {"source": "S", "target": "S", "deg": 1, "blocks": {"0": [["0", "1"], ...]}}},
     "complexes": {"C": {"space": "S", "d": "d"}}, ...}

Map sources and targets name a space (or a complex, meaning its space); a
list of names is their tensor product. Blocks are dense row-major matrices
of scalar strings keyed by source degree. Streamed complexes are written as
constructors, ``{"stream": "bar_algebra of A"}``. Serialization sorts keys
(integer keys numerically) and writes scalars in lowest terms, so it is
byte-stable.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from .ainfty import AInfAlgebra, AInfAlgMorphism
from .bitwisted import TwistedBicomplex, cxcol, cxrow
from .categories import ChCategory
from .complexes import Complex, make_complex, tensor, zero_differential
from .errors import DocumentError, TwistkitError
from .field import Field
from .graded import GradedMap, GradedSpace, dm_from_dok, gmap, tensor_spaces
from .modules import LEFT, RIGHT, AInfModule, ModMorphism, NodCategory
from .quiver import QuiverCategory, make_quiver, quiver_element, quiver_of_complexes
from .retract import RetractData, check_retract, homology_retract
from .twisted import TwistedCategory, TwistedComplex, TwistedMorphism

FORMAT = 1

SECTIONS = (
    "spaces",
    "maps",
    "complexes",
    "quivers",
    "algebras",
    "alg_morphisms",
    "modules",
    "mod_morphisms",
    "twisted",
    "bicomplexes",
    "retracts",
)

Ref = Union[str, List[str]]


# ---------- small validators ----------

def _expect(value: Any, kind, path: str, what: str):
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise DocumentError(path, f"expected {what}")
    return value


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool):
        raise DocumentError(path, "expected an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError:
            pass
    raise DocumentError(path, "expected an integer")


def _field_key(raw: Dict[str, Any], key: str, path: str, default: Any = None) -> Any:
    if key in raw:
        return raw[key]
    if default is not None:
        return default
    raise DocumentError(f"{path}.{key}", "missing field")


def _sort_key(key: str):
    try:
        return (0, int(key), "")
    except ValueError:
        return (1, 0, key)


def _ordered(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _ordered(value[k]) for k in sorted(value, key=lambda k: _sort_key(str(k)))}
    if isinstance(value, list):
        return [_ordered(v) for v in value]
    return value


def _cell(value: Any, path: str) -> Tuple[int, int]:
    _expect(value, list, path, "a cell [i, j]")
    if len(value) != 2:
        raise DocumentError(path, "expected a cell [i, j]")
    return _int(value[0], f"{path}[0]"), _int(value[1], f"{path}[1]")


# ---------- the document ----------

class Document:
    """Raw sections plus lazily resolved entities."""

    def __init__(self, field: Field, data: Optional[Dict[str, Dict[str, Any]]] = None) -> None:
        self.field = field
        self.data: Dict[str, Dict[str, Any]] = {s: {} for s in SECTIONS}
        for s, entries in (data or {}).items():
            self.data[s] = dict(entries)
        self._cache: Dict[Tuple[str, str], Any] = {}
        self._resolving: set = set()
        self._by_id: Dict[int, Tuple[str, str]] = {}

    # ---------- lookup ----------

    def names(self, section: str) -> List[str]:
        return sorted(self.data[section])

    def get(self, section: str, name: Any, path: Optional[str] = None) -> Any:
        path = path or section
        if not isinstance(name, str) or name not in self.data[section]:
            raise DocumentError(path, f"unresolved reference {name!r} (no such entry in {section})")
        key = (section, name)
        if key in self._cache:
            return self._cache[key]
        if key in self._resolving:
            raise DocumentError(path, f"circular reference through {section}.{name}")
        self._resolving.add(key)
        here = f"{section}.{name}"
        try:
            raw = _expect(self.data[section][name], dict, here, "an object")
            obj = getattr(self, f"_build_{section}")(name, raw, here)
        except DocumentError:
            raise
        except TwistkitError as e:
            raise DocumentError(here, e.detail) from None
        finally:
            self._resolving.discard(key)
        self._cache[key] = obj
        self._by_id[id(obj)] = key
        return obj

    def single(self, section: str, name: Optional[str] = None) -> Tuple[str, Any]:
        """The named entry, or the only entry of the section."""
        if name is None:
            names = self.names(section)
            if len(names) != 1:
                raise DocumentError(section, f"expected exactly one entry, found {names}; pass --name")
            name = names[0]
        return name, self.get(section, name)

    def resolve_all(self) -> None:
        for s in SECTIONS:
            for n in self.names(s):
                self.get(s, n)

    # ---------- builders ----------

    def _space(self, ref: Any, path: str) -> GradedSpace:
        if isinstance(ref, list):
            if not ref:
                raise DocumentError(path, "empty tensor product")
            return tensor_spaces(*(self._space(r, f"{path}[{k}]") for k, r in enumerate(ref)))
        if isinstance(ref, str) and ref in self.data["spaces"]:
            return self.get("spaces", ref, path)
        if isinstance(ref, str) and ref in self.data["complexes"]:
            return self.get("complexes", ref, path).space
        raise DocumentError(path, f"unresolved reference {ref!r} (no such space or complex)")

    def _scalar(self, value: Any, path: str):
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            raise DocumentError(path, "expected a scalar string")
        try:
            return self.field(value)
        except TwistkitError as e:
            raise DocumentError(path, e.detail) from None

    def _build_spaces(self, name: str, raw: Dict[str, Any], path: str) -> GradedSpace:
        dims = {_int(k, f"{path}.{k}"): _int(v, f"{path}.{k}") for k, v in raw.items()}
        for n, k in dims.items():
            if k < 0:
                raise DocumentError(f"{path}.{n}", "negative dimension")
        return GradedSpace.of(dims)

    def _build_maps(self, name: str, raw: Dict[str, Any], path: str) -> GradedMap:
        source = self._space(_field_key(raw, "source", path), f"{path}.source")
        target = self._space(_field_key(raw, "target", path), f"{path}.target")
        deg = _int(_field_key(raw, "deg", path), f"{path}.deg")
        blocks = {}
        for key, rows in _expect(raw.get("blocks", {}), dict, f"{path}.blocks", "an object").items():
            bpath = f"{path}.blocks.{key}"
            n = _int(key, bpath)
            shape = (target.dim(n + deg), source.dim(n))
            _expect(rows, list, bpath, "a matrix")
            if len(rows) != shape[0] or any(not isinstance(r, list) or len(r) != shape[1] for r in rows):
                raise DocumentError(bpath, f"shape mismatch: expected {shape[0]} x {shape[1]}")
            dok = {(i, j): self._scalar(v, f"{bpath}[{i}][{j}]") for i, r in enumerate(rows) for j, v in enumerate(r)}
            blocks[n] = dm_from_dok(dok, shape, self.field)
        return gmap(source, target, deg, blocks, self.field)

    def _map(self, ref: Any, path: str) -> GradedMap:
        return self.get("maps", ref, path)

    def _build_complexes(self, name: str, raw: Dict[str, Any], path: str) -> Complex:
        if "tensor" in raw:
            parts = _expect(raw["tensor"], list, f"{path}.tensor", "a list of complexes")
            return tensor(*(self.get("complexes", r, f"{path}.tensor[{k}]") for k, r in enumerate(parts)))
        space = self._space(_field_key(raw, "space", path), f"{path}.space")
        if "d" not in raw:
            return zero_differential(space, self.field)
        d = self._map(raw["d"], f"{path}.d")
        if d.source != space or d.target != space:
            raise DocumentError(f"{path}.d", "differential does not act on the declared space")
        return make_complex(space, d)

    def _build_quivers(self, name: str, raw: Dict[str, Any], path: str):
        if "of_complexes" in raw:
            names = _expect(raw["of_complexes"], list, f"{path}.of_complexes", "a list of complexes")
            return quiver_of_complexes(
                {r: self.get("complexes", r, f"{path}.of_complexes[{k}]") for k, r in enumerate(names)}, self.field
            )
        objects = [str(o) for o in _expect(_field_key(raw, "objects", path), list, f"{path}.objects", "a list")]
        homs = {}
        for key, ref in _expect(_field_key(raw, "homs", path), dict, f"{path}.homs", "an object").items():
            a, _, b = key.partition(",")
            homs[(a, b)] = self.get("complexes", ref, f"{path}.homs.{key}")
        comp = {}
        for key, ref in _expect(raw.get("comp", {}), dict, f"{path}.comp", "an object").items():
            parts = tuple(key.split(","))
            if len(parts) != 3:
                raise DocumentError(f"{path}.comp.{key}", "expected a key 'a,b,c'")
            comp[parts] = self._map(ref, f"{path}.comp.{key}")
        units = {a: self._map(ref, f"{path}.units.{a}")
                 for a, ref in _expect(raw.get("units", {}), dict, f"{path}.units", "an object").items()}
        return make_quiver(objects, homs, comp, units, self.field)

    def _ops(self, raw: Dict[str, Any], key: str, path: str) -> Dict[int, GradedMap]:
        ops = _expect(raw.get(key, {}), dict, f"{path}.{key}", "an object")
        return {_int(i, f"{path}.{key}.{i}"): self._map(ref, f"{path}.{key}.{i}") for i, ref in ops.items()}

    def _build_algebras(self, name: str, raw: Dict[str, Any], path: str) -> AInfAlgebra:
        A = self.get("complexes", _field_key(raw, "complex", path), f"{path}.complex")
        m = self._ops(raw, "ops", path)
        bound = _int(raw.get("bound", max(list(m) + [2])), f"{path}.bound")
        return AInfAlgebra(A, m, bound, name=name)

    def _build_alg_morphisms(self, name: str, raw: Dict[str, Any], path: str) -> AInfAlgMorphism:
        source = self.get("algebras", _field_key(raw, "source", path), f"{path}.source")
        target = self.get("algebras", _field_key(raw, "target", path), f"{path}.target")
        f = self._ops(raw, "components", path)
        bound = _int(raw.get("bound", max(list(f) + [1])), f"{path}.bound")
        return AInfAlgMorphism(source, target, f, bound)

    def _build_modules(self, name: str, raw: Dict[str, Any], path: str) -> AInfModule:
        E = self.get("complexes", _field_key(raw, "complex", path), f"{path}.complex")
        algebra = self.get("algebras", _field_key(raw, "algebra", path), f"{path}.algebra")
        side = raw.get("side", RIGHT)
        if side not in (RIGHT, LEFT):
            raise DocumentError(f"{path}.side", "expected 'right' or 'left'")
        p = self._ops(raw, "ops", path)
        bound = _int(raw.get("bound", max(list(p) + [2])), f"{path}.bound")
        return AInfModule(E, algebra, p, bound, side, name=name)

    def _build_mod_morphisms(self, name: str, raw: Dict[str, Any], path: str) -> ModMorphism:
        source = self.get("modules", _field_key(raw, "source", path), f"{path}.source")
        target = self.get("modules", _field_key(raw, "target", path), f"{path}.target")
        deg = _int(_field_key(raw, "deg", path), f"{path}.deg")
        f = self._ops(raw, "components", path)
        bound = _int(raw.get("bound", max(list(f) + [1])), f"{path}.bound")
        return ModMorphism(source, target, deg, f, bound)

    def _stream(self, spec: Any, path: str) -> TwistedComplex:
        text = _expect(spec, str, path, "a constructor such as 'bar_algebra of A'")
        kind, sep, ref = text.partition(" of ")
        ref = ref.strip()
        if not sep:
            raise DocumentError(path, f"bad constructor {text!r}")
        if kind.strip() == "bar_algebra":
            return self.get("algebras", ref, path).bar
        if kind.strip() == "bar_module":
            return self.get("modules", ref, path).bar
        raise DocumentError(path, f"unknown constructor {kind.strip()!r}")

    def _category(self, over: Any, path: str):
        over = _expect(over, str, path, "a category name")
        kind, _, ref = over.partition(":")
        if kind == "ch":
            return ChCategory(self.field)
        if kind == "quiver":
            return QuiverCategory(self.get("quivers", ref, path))
        if kind == "nod":
            return NodCategory(self.get("algebras", ref, path))
        if kind == "twisted":
            return TwistedCategory(ChCategory(self.field))
        raise DocumentError(path, f"unknown category {over!r}")

    def _object(self, cat, ref: Any, path: str):
        if isinstance(cat, ChCategory):
            return self.get("complexes", ref, path)
        if isinstance(cat, QuiverCategory):
            if ref not in cat.quiver.objects:
                raise DocumentError(path, f"unresolved reference {ref!r} (no such quiver object)")
            return ref
        if isinstance(cat, NodCategory):
            return self.get("modules", ref, path)
        return self.get("twisted", ref, path)

    def _arrow(self, cat, a: Dict[str, Any], src_obj, tgt_obj, degree: int, path: str):
        if isinstance(cat, ChCategory):
            return self._map(_field_key(a, "map", path), f"{path}.map")
        if isinstance(cat, NodCategory):
            return self.get("mod_morphisms", _field_key(a, "morphism", path), f"{path}.morphism")
        if isinstance(cat, QuiverCategory):
            el = _expect(_field_key(a, "element", path), dict, f"{path}.element", "an object")
            coords = {_int(k, f"{path}.element.coords.{k}"): self._scalar(v, f"{path}.element.coords.{k}")
                      for k, v in _expect(el.get("coords", {}), dict, f"{path}.element.coords", "an object").items()}
            deg = _int(el.get("deg", degree), f"{path}.element.deg")
            return quiver_element(cat.quiver, src_obj, tgt_obj, deg, coords)
        comps = {}
        for k, c in enumerate(_expect(_field_key(a, "components", path), list, f"{path}.components", "a list")):
            cpath = f"{path}.components[{k}]"
            c = _expect(c, dict, cpath, "an object")
            comps[(_int(_field_key(c, "from", cpath), f"{cpath}.from"), _int(_field_key(c, "to", cpath), f"{cpath}.to"))] = \
                self._map(_field_key(c, "map", cpath), f"{cpath}.map")
        return TwistedMorphism.bounded(src_obj, tgt_obj, degree, comps)

    def _build_twisted(self, name: str, raw: Dict[str, Any], path: str) -> TwistedComplex:
        if "stream" in raw:
            return self._stream(raw["stream"], f"{path}.stream")
        cat = self._category(raw.get("over", "ch"), f"{path}.over")
        objects = {}
        for key, ref in _expect(_field_key(raw, "objects", path), dict, f"{path}.objects", "an object").items():
            objects[_int(key, f"{path}.objects.{key}")] = self._object(cat, ref, f"{path}.objects.{key}")
        diffs = {}
        for k, a in enumerate(_expect(raw.get("arrows", []), list, f"{path}.arrows", "a list")):
            apath = f"{path}.arrows[{k}]"
            a = _expect(a, dict, apath, "an object")
            i = _int(_field_key(a, "from", apath), f"{apath}.from")
            j = _int(_field_key(a, "to", apath), f"{apath}.to")
            if i not in objects or j not in objects:
                raise DocumentError(apath, f"arrow {i}->{j} touches an absent object")
            diffs[(i, j)] = self._arrow(cat, a, objects[i], objects[j], i - j + 1, apath)
        return TwistedComplex.bounded(cat, objects, diffs, name=name)

    def _build_bicomplexes(self, name: str, raw: Dict[str, Any], path: str) -> TwistedBicomplex:
        for key, build in (("cxrow", cxrow), ("cxcol", cxcol)):
            if key in raw:
                CC = self.get("twisted", raw[key], f"{path}.{key}")
                if not isinstance(CC.category, TwistedCategory):
                    raise DocumentError(f"{path}.{key}", "expected a complex of complexes (over 'twisted')")
                return build(CC)
        objects = {}
        for k, o in enumerate(_expect(_field_key(raw, "objects", path), list, f"{path}.objects", "a list")):
            opath = f"{path}.objects[{k}]"
            o = _expect(o, dict, opath, "an object")
            objects[_cell(_field_key(o, "cell", opath), f"{opath}.cell")] = \
                self.get("complexes", _field_key(o, "object", opath), f"{opath}.object")
        diffs = {}
        for k, a in enumerate(_expect(raw.get("arrows", []), list, f"{path}.arrows", "a list")):
            apath = f"{path}.arrows[{k}]"
            a = _expect(a, dict, apath, "an object")
            s = _cell(_field_key(a, "from", apath), f"{apath}.from")
            t = _cell(_field_key(a, "to", apath), f"{apath}.to")
            diffs[(s, t)] = self._map(_field_key(a, "map", apath), f"{apath}.map")
        return TwistedBicomplex.bounded(ChCategory(self.field), objects, diffs, name=name)

    def _build_retracts(self, name: str, raw: Dict[str, Any], path: str) -> RetractData:
        if "onto_homology" in raw:
            return homology_retract(self.get("complexes", raw["onto_homology"], f"{path}.onto_homology"))
        P = self.get("complexes", _field_key(raw, "P", path), f"{path}.P")
        Q = self.get("complexes", _field_key(raw, "Q", path), f"{path}.Q")
        r = RetractData(P, Q, *(self._map(_field_key(raw, k, path), f"{path}.{k}") for k in ("f", "g", "h")))
        check_retract(r)
        return r

    # ---------- writers ----------

    def _fresh(self, section: str, base: str) -> str:
        name, k = base, 1
        while name in self.data[section]:
            k += 1
            name = f"{base}_{k}"
        return name

    def _remember(self, section: str, name: str, obj: Any) -> str:
        self._cache[(section, name)] = obj
        self._by_id[id(obj)] = (section, name)
        return name

    def space_ref(self, space: GradedSpace, hint: str) -> Ref:
        """A name (or list of names for a tensor product) under which ``space`` is stored."""
        if space.factors:
            return [self.space_ref(f, f"{hint}{k}") for k, f in enumerate(space.factors)]
        for name in self.names("spaces"):
            if self.get("spaces", name) == space:
                return name
        name = self._fresh("spaces", hint)
        self.data["spaces"][name] = {str(n): k for n, k in space.dims}
        return self._remember("spaces", name, space)

    def add_map(self, name: str, f: GradedMap) -> str:
        name = self._fresh("maps", name)
        blocks = {}
        for n in sorted(f.blocks):
            M = f.blocks[n].to_dense().to_list()
            blocks[str(n)] = [[self.field.format(v) for v in row] for row in M]
        self.data["maps"][name] = {
            "source": self.space_ref(f.source, f"{name}_src"),
            "target": self.space_ref(f.target, f"{name}_tgt"),
            "deg": f.degree,
            "blocks": blocks,
        }
        return self._remember("maps", name, f)

    def complex_ref(self, C: Complex, hint: str) -> str:
        known = self._by_id.get(id(C))
        if known is not None and known[0] == "complexes":
            return known[1]
        name = self._fresh("complexes", hint)
        if C.factors:
            entry: Dict[str, Any] = {"tensor": [self.complex_ref(F, f"{name}{k}") for k, F in enumerate(C.factors)]}
        else:
            entry = {"space": self.space_ref(C.space, f"{name}_space")}
            if not C.d.is_zero:
                entry["d"] = self.add_map(f"{name}_d", C.d)
        self.data["complexes"][name] = entry
        return self._remember("complexes", name, C)

    def entity_ref(self, obj: Any) -> Optional[str]:
        known = self._by_id.get(id(obj))
        return None if known is None else known[1]

    def add_algebra(self, name: str, alg: AInfAlgebra) -> str:
        name = self._fresh("algebras", name)
        A = self.complex_ref(alg.A, f"{name}_A")
        ops = {str(i): self.add_map(f"{name}_m{i}", op) for i, op in sorted(alg.m.items()) if not op.is_zero}
        self.data["algebras"][name] = {"complex": A, "ops": ops, "bound": alg.bound}
        return self._remember("algebras", name, alg)

    def add_module(self, name: str, mod: AInfModule, algebra: str) -> str:
        name = self._fresh("modules", name)
        E = self.complex_ref(mod.E, f"{name}_E")
        ops = {str(i): self.add_map(f"{name}_p{i}", op) for i, op in sorted(mod.p.items()) if not op.is_zero}
        self.data["modules"][name] = {"complex": E, "algebra": algebra, "side": mod.side, "ops": ops, "bound": mod.bound}
        return self._remember("modules", name, mod)

    def add_mod_morphism(self, name: str, f: ModMorphism, source: str, target: str) -> str:
        name = self._fresh("mod_morphisms", name)
        comps = {str(i): self.add_map(f"{name}_{i}", c) for i, c in sorted(f.f.items())}
        self.data["mod_morphisms"][name] = {"source": source, "target": target, "deg": f.degree,
                                            "components": comps, "bound": f.bound}
        return self._remember("mod_morphisms", name, f)

    def add_twisted(self, name: str, T: TwistedComplex) -> str:
        """A bounded twisted complex over Ch, or a complex of complexes."""
        name = self._fresh("twisted", name)
        nested = isinstance(T.category, TwistedCategory)
        objects, arrows = {}, []
        for i in T.cells():
            objects[str(i)] = (self.add_twisted(f"{name}_{i}", T.obj(i)) if nested
                               else self.complex_ref(T.obj(i), f"{name}_{i}"))
        for i in T.cells():
            for j in T.targets(i):
                a = T.arrow(i, j)
                if nested:
                    comps = [{"from": s, "to": t, "map": self.add_map(f"{name}_{i}_{j}_{s}_{t}", a.component(s, t))}
                             for s in a.source.cells() for t in a.targets(s)]
                    arrows.append({"from": i, "to": j, "components": comps})
                else:
                    arrows.append({"from": i, "to": j, "map": self.add_map(f"{name}_{i}_{j}", a)})
        self.data["twisted"][name] = {"over": "twisted" if nested else "ch", "objects": objects, "arrows": arrows}
        return self._remember("twisted", name, T)

    def add_bicomplex(self, name: str, B: TwistedBicomplex) -> str:
        name = self._fresh("bicomplexes", name)
        cells = B.cells()
        objects = [{"cell": list(c), "object": self.complex_ref(B.obj(c), f"{name}_{c[0]}_{c[1]}")} for c in cells]
        arrows = [
            {"from": list(s), "to": list(t), "map": self.add_map(f"{name}_{s[0]}_{s[1]}_{t[0]}_{t[1]}", B.arrow(s, t))}
            for s in cells for t in B.targets(s)
        ]
        self.data["bicomplexes"][name] = {"objects": objects, "arrows": arrows}
        return self._remember("bicomplexes", name, B)

    def copy(self) -> "Document":
        doc = Document(self.field, json.loads(json.dumps(self.data)))
        return doc


# ---------- parse / serialize ----------

def parse(text: Union[str, bytes], default_field: Optional[str] = None) -> Document:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError("", f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    raw = _expect(raw, dict, "", "a JSON object at the top level")
    fmt = raw.get("format", FORMAT)
    if fmt != FORMAT:
        raise DocumentError("format", f"unsupported format {fmt!r}")
    spec = raw.get("field", default_field)
    if spec is None:
        raise DocumentError("field", "missing field declaration")
    try:
        field = Field.from_spec(_expect(spec, str, "field", "a field declaration"))
    except TwistkitError as e:
        raise DocumentError("field", e.detail) from None
    unknown = sorted(set(raw) - set(SECTIONS) - {"format", "field"})
    if unknown:
        raise DocumentError(unknown[0], "unknown section")
    data = {s: _expect(raw.get(s, {}), dict, s, "an object") for s in SECTIONS}
    doc = Document(field, data)
    doc.resolve_all()
    _canonicalize(doc)
    return doc


def _canonicalize(doc: Document) -> None:
    """Rewrite scalars in lowest terms."""
    for entry in doc.data["maps"].values():
        blocks = entry.get("blocks", {})
        for key, rows in blocks.items():
            blocks[key] = [[doc.field.format(doc.field(v)) for v in row] for row in rows]
    for entry in doc.data["twisted"].values():
        for a in entry.get("arrows", []):
            el = a.get("element")
            if isinstance(el, dict) and "coords" in el:
                el["coords"] = {k: doc.field.format(doc.field(v)) for k, v in el["coords"].items()}


def serialize(doc: Document) -> str:
    out: Dict[str, Any] = {"format": FORMAT, "field": doc.field.spec}
    for s in SECTIONS:
        if doc.data[s]:
            out[s] = doc.data[s]
    return json.dumps(_ordered(out), indent=2, ensure_ascii=False) + "\n"


def empty(field: Field) -> Document:
    return Document(field)


def load(path: Union[str, Path], default_field: Optional[str] = None) -> Document:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentError("", f"cannot read {path}: {e.strerror}") from None
    return parse(text, default_field)


def dump(doc: Document, path: Union[str, Path]) -> None:
    Path(path).write_text(serialize(doc), encoding="utf-8")

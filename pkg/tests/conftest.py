import json
import random

import pytest

from core.complexes import Complex, make_complex, zero_differential
from core.field import Field
from core.graded import GradedSpace, gmap_from_entries


@pytest.fixture
def Q():
    return Field.from_spec("q")


@pytest.fixture
def F101():
    return Field.from_spec("fp:101")


@pytest.fixture
def rng():
    return random.Random(20240607)


def point(field, degree=0, dim=1) -> Complex:
    """k^dim concentrated in one degree."""
    return zero_differential(GradedSpace.of({degree: dim}), field)


def interval(field, value=1) -> Complex:
    """k -> k in degrees 0 and 1 with d = value."""
    space = GradedSpace.of({0: 1, 1: 1})
    d = gmap_from_entries(space, space, 1, {0: {(0, 0): field(value)}}, field)
    return make_complex(space, d)


def write_doc(tmp_path, name, data) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def interval_section(alpha_blocks):
    """Two copies of k -> k joined by alpha_01 = ``alpha_blocks`` (degree 0)."""
    return {
        "spaces": {"S": {"0": 1, "1": 1}},
        "maps": {
            "d": {"source": "S", "target": "S", "deg": 1, "blocks": {"0": [["1"]]}},
            "alpha": {"source": "S", "target": "S", "deg": 0, "blocks": alpha_blocks},
        },
        "complexes": {"C": {"space": "S", "d": "d"}},
        "twisted": {
            "T": {
                "over": "ch",
                "objects": {"0": "C", "1": "C"},
                "arrows": [{"from": 0, "to": 1, "map": "alpha"}],
            }
        },
    }


@pytest.fixture
def cone_data():
    """A closed alpha_01 (the identity): a valid two-term twisted complex."""
    return {"format": 1, "field": "q", **interval_section({"0": [["1"]], "1": [["1"]]})}


@pytest.fixture
def broken_data():
    """alpha_01 is the identity on degree 0 only, so d(alpha_01) is nonzero."""
    return {"format": 1, "field": "q", **interval_section({"0": [["1"]]})}


@pytest.fixture
def upper_triangular_data():
    """Upper triangular 2 x 2 matrices; basis e00, e01, e11."""
    def e(a, b):
        return {(0, 0): 0, (0, 1): 1, (1, 1): 2}[(a, b)]

    units = [(0, 0), (0, 1), (1, 1)]
    rows = [["0"] * 9 for _ in range(3)]
    for x, (a, b) in enumerate(units):
        for y, (c, d) in enumerate(units):
            if b == c:
                rows[e(a, d)][3 * x + y] = "1"
    return {
        "format": 1,
        "field": "q",
        "spaces": {"A": {"0": 3}},
        "maps": {"m2": {"source": ["A", "A"], "target": "A", "deg": 0, "blocks": {"0": rows}}},
        "complexes": {"A": {"space": "A"}},
        "algebras": {"U": {"complex": "A", "ops": {"2": "m2"}, "bound": 2}},
    }

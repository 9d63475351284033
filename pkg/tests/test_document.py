import json

import pytest

from core.categories import ChCategory
from core.document import dump, empty, load, parse, serialize
from core.errors import DocumentError
from core.field import Field
from core.graded import gmap_equal, gmap_from_entries
from core.random_data import upper_triangular_algebra
from core.twisted import TwistedComplex, check_twisted, truncate

from .conftest import interval


def test_empty_document_round_trips(Q):
    text = serialize(empty(Q))
    doc = parse(text)
    assert doc.field == Q
    assert doc.names("maps") == []
    assert serialize(doc) == text


def test_cone_document_resolves(cone_data):
    doc = parse(json.dumps(cone_data))
    name, T = doc.single("twisted")
    assert name == "T"
    assert T.cells() == [0, 1]
    assert check_twisted(T, T.cells()).ok
    assert T.obj(0) is doc.get("complexes", "C")


def test_serialization_is_stable(cone_data):
    text = serialize(parse(json.dumps(cone_data)))
    assert serialize(parse(text)) == text
    assert list(json.loads(text)) == ["complexes", "field", "format", "maps", "spaces", "twisted"]


def test_scalars_are_written_in_lowest_terms(cone_data):
    cone_data["maps"]["d"]["blocks"]["0"] = [["2/2"]]
    doc = parse(json.dumps(cone_data))
    assert doc.data["maps"]["d"]["blocks"]["0"] == [["1"]]
    cone_data["field"] = "fp:7"
    cone_data["maps"]["d"]["blocks"]["0"] = [["8"]]
    doc = parse(json.dumps(cone_data))
    assert doc.data["maps"]["d"]["blocks"]["0"] == [["1 mod 7"]]


def test_default_field_applies_only_when_missing(cone_data):
    del cone_data["field"]
    with pytest.raises(DocumentError) as err:
        parse(json.dumps(cone_data))
    assert err.value.path == "field"
    assert parse(json.dumps(cone_data), default_field="fp:5").field == Field.from_spec("fp:5")


def test_malformed_json_is_a_document_error():
    with pytest.raises(DocumentError) as err:
        parse('{"format": 1,')
    assert "malformed JSON" in err.value.detail
    with pytest.raises(DocumentError):
        parse("[1, 2]")


def test_unknown_sections_and_formats_are_refused(cone_data):
    with pytest.raises(DocumentError) as err:
        parse(json.dumps({**cone_data, "extras": {}}))
    assert err.value.path == "extras"
    with pytest.raises(DocumentError) as err:
        parse(json.dumps({**cone_data, "format": 2}))
    assert err.value.path == "format"


def test_unresolved_reference_names_the_entry(cone_data):
    cone_data["complexes"]["C"]["d"] = "missing"
    with pytest.raises(DocumentError) as err:
        parse(json.dumps(cone_data))
    assert err.value.path == "complexes.C.d"
    assert "'missing'" in err.value.detail


def test_shape_mismatch_reports_the_block(cone_data):
    cone_data["maps"]["alpha"]["blocks"]["0"] = [["1", "0"]]
    with pytest.raises(DocumentError) as err:
        parse(json.dumps(cone_data))
    assert err.value.path == "maps.alpha.blocks.0"
    assert "shape mismatch" in err.value.detail


def test_circular_references_are_caught():
    data = {"format": 1, "field": "q", "complexes": {"C": {"tensor": ["C"]}}}
    with pytest.raises(DocumentError) as err:
        parse(json.dumps(data))
    assert "circular" in err.value.detail


def test_invalid_entities_become_document_errors(cone_data):
    cone_data["maps"]["alpha"]["deg"] = 1
    cone_data["maps"]["alpha"]["blocks"] = {"0": [["1"]]}
    with pytest.raises(DocumentError) as err:
        parse(json.dumps(cone_data))
    assert err.value.path == "twisted.T"


def test_streamed_bar_constructor(upper_triangular_data):
    upper_triangular_data["twisted"] = {"B": {"stream": "bar_algebra of U"}}
    doc = parse(json.dumps(upper_triangular_data))
    assert doc.get("twisted", "B") is doc.get("algebras", "U").bar
    upper_triangular_data["twisted"] = {"B": {"stream": "cobar of U"}}
    with pytest.raises(DocumentError) as err:
        parse(json.dumps(upper_triangular_data))
    assert "unknown constructor" in err.value.detail


def test_written_twisted_complex_reads_back(Q, tmp_path):
    C = interval(Q)
    alpha = gmap_from_entries(C.space, C.space, 0, {0: {(0, 0): Q(3)}, 1: {(0, 0): Q(3)}}, Q)
    T = TwistedComplex.bounded(ChCategory(Q), {0: C, 1: C}, {(0, 1): alpha})
    doc = empty(Q)
    name = doc.add_twisted("T", T)
    assert doc.add_twisted("T", T) == "T_2"
    path = tmp_path / "out.dgj"
    dump(doc, path)
    back = load(path).get("twisted", name)
    assert back.cells() == [0, 1]
    assert gmap_equal(back.arrow(0, 1), alpha)
    assert gmap_equal(back.obj(0).d, C.d)


def test_missing_file(tmp_path):
    with pytest.raises(DocumentError) as err:
        load(tmp_path / "absent.dgj")
    assert "cannot read" in err.value.detail


def test_single_needs_exactly_one_entry(Q):
    with pytest.raises(DocumentError) as err:
        empty(Q).single("twisted")
    assert err.value.path == "twisted"


def test_truncated_bar_round_trips_byte_identically(Q):
    alg = upper_triangular_algebra(Q)
    doc = empty(Q)
    doc.add_algebra("U", alg)
    doc.add_twisted("bar_U", truncate(alg.bar, -2, 0))
    text = serialize(doc)
    back = parse(text)
    assert serialize(back) == text
    assert back.get("twisted", "bar_U").targets(-2) == (-1,)
    assert back.get("algebras", "U").bound == 2

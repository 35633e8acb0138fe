import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from carnotpq import catalog
from carnotpq.documents import (
    DocumentError,
    decode_scalar,
    dumps,
    encode_scalar,
    from_document,
    load_file,
    loads,
    to_document,
    vectors_document,
)
from carnotpq.field import Field, FieldElement
from carnotpq.forms import LinearCoeff, formal_dphi, interior, wedge
from carnotpq.product_quotient import build
from carnotpq.pullback import make_beta, make_omega_ij, sample_automorphisms

from conftest import small_fractions


def roundtrip(obj) -> tuple[str, str]:
    text = dumps(to_document(obj))
    return text, dumps(to_document(loads(text)))


@pytest.mark.parametrize("entry", catalog.ENTRIES, ids=lambda e: e.name)
def test_catalog_roundtrip_byte_identical(entry):
    a, b = roundtrip(entry.build())
    assert a == b


@pytest.mark.parametrize("name", ["diag-n3", "z5-k2", "h1c-graph"])
def test_map_roundtrip(name):
    p = catalog.get(name).build()
    for phi in sample_automorphisms(p, 2, seed=4):
        a, b = roundtrip(phi)
        assert a == b and loads(a) == phi


def test_form_roundtrip_with_formal_coefficients():
    bp = build(catalog.get("diag-n3").build())
    beta = interior(bp.X(1, 0), make_beta(bp, 0))
    symbolic = wedge(formal_dphi(bp.quotient.dim), beta)
    for form in (make_omega_ij(bp, 0, 1), symbolic):
        a, b = roundtrip(form)
        assert a == b and loads(a) == form


@given(small_fractions, small_fractions)
def test_scalar_encoding_roundtrip(a, b):
    x = FieldElement(a, b, 5)
    assert decode_scalar(encode_scalar(x, 5), 5) == x
    r = FieldElement(a, 0, 0)
    assert encode_scalar(r, 0) == str(a)
    assert decode_scalar(str(a), 0) == r


def test_rationals_serialize_as_text():
    assert encode_scalar(Field(0)(Fraction(-3, 4)), 0) == "-3/4"
    assert encode_scalar(Field(5)(1, Fraction(1, 2)), 5) == {"a": "1", "b": "1/2"}


def test_canonical_serialization_sorted_keys():
    text = dumps(to_document(catalog.get("h1").build()))
    doc = json.loads(text)
    assert list(doc) == sorted(doc) and text.endswith("\n")
    assert doc["version"] == 1 and doc["kind"] == "algebra"


def test_vectors_document(tmp_path):
    doc = vectors_document([(Field(0)(1), Field(0)(2))], 2)
    path = tmp_path / "v.json"
    path.write_text(dumps(doc))
    assert load_file(str(path)) == [(1, 2)]


@pytest.mark.parametrize(
    "doc",
    [
        [],
        {"kind": "algebra"},
        {"version": 99, "kind": "algebra", "d": 0},
        {"version": 1, "kind": "nonsense", "d": 0},
        {"version": 1, "kind": "algebra", "d": 0, "layers": [2, 1], "brackets": [[0, 1, 7, "1"]], "name": ""},
        {"version": 1, "kind": "algebra", "d": 0, "layers": [2, 1], "brackets": [[0, 1, 2, "x/y"]], "name": ""},
        {"version": 1, "kind": "presentation", "d": 0, "F": "quaternion", "m": 1, "n": 2, "K": [], "name": ""},
        {"version": 1, "kind": "presentation", "d": 0, "F": "real", "m": 1, "n": 2, "K": [["1"]], "name": ""},
        {"version": 1, "kind": "algebra", "d": 4, "layers": [1], "brackets": [], "name": ""},
    ],
)
def test_malformed_documents_rejected(doc):
    with pytest.raises(DocumentError):
        from_document(doc)


def test_loads_rejects_bad_json():
    with pytest.raises(DocumentError):
        loads("{not json")
    with pytest.raises(DocumentError):
        load_file("/nonexistent/file.json")

"""Canonical JSON documents for algebras, presentations, maps and forms.

Every document carries ``"version": 1``, a ``"kind"`` and the field tag
``"d"``.  Scalars over Q are strings ``"p/q"`` (``"3"`` for integers); over
``Q(sqrt d)`` they are objects ``{"a": "p/q", "b": "p/q"}``.  Symbolic
coefficients of the formal differential are ``{"const": s, "c": [[i, s], ...]}``.
Serialization sorts keys and indents by two spaces, so parsing a document
and writing it back reproduces it byte for byte.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any

from .field import Field, FieldElement, check_field_tag
from .forms import Form, LinearCoeff, MultiVector, mask_of
from .lie import GradedAlgebra, GradedMap
from .linalg import Matrix, Subspace
from .product_quotient import COMPLEX, REAL, Presentation

VERSION = 1
KINDS = ("algebra", "presentation", "map", "form", "vectors")


class DocumentError(ValueError):
    """A document is malformed or inconsistent."""


# ---------------------------------------------------------------------------
# scalars


def encode_scalar(x, d: int = 0):
    if isinstance(x, LinearCoeff):
        return {
            "const": encode_scalar(x.const, d),
            "c": [[i, encode_scalar(v, d)] for i, v in sorted(x.terms.items())],
        }
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Fraction)):
        x = Field(d)(x)
    if not isinstance(x, FieldElement):
        raise TypeError(f"cannot encode {x!r} as a scalar")
    if d == 0:
        if x.b != 0:
            raise DocumentError("irrational scalar in a rational document")
        return str(x.a)
    return {"a": str(x.a), "b": str(x.b)}


def _fraction(s) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise DocumentError(f"expected a rational string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad rational {s!r}") from exc


def decode_scalar(obj, d: int = 0) -> FieldElement:
    if isinstance(obj, dict):
        if set(obj) != {"a", "b"}:
            raise DocumentError(f"scalar object must have keys a and b, got {sorted(obj)}")
        if d == 0 and _fraction(obj["b"]) != 0:
            raise DocumentError("irrational scalar in a rational document")
        return FieldElement(_fraction(obj["a"]), _fraction(obj["b"]), d)
    return FieldElement(_fraction(obj), 0, d)


def decode_coefficient(obj, d: int = 0):
    if isinstance(obj, dict) and "const" in obj:
        terms = {}
        for pair in obj.get("c", []):
            if not (isinstance(pair, list) and len(pair) == 2 and isinstance(pair[0], int)):
                raise DocumentError("symbolic terms must be [index, scalar] pairs")
            terms[pair[0]] = decode_scalar(pair[1], d)
        return LinearCoeff(decode_scalar(obj["const"], d), terms, d)
    return decode_scalar(obj, d)


def encode_matrix(M: Matrix) -> list:
    return [[encode_scalar(x, M.d) for x in row] for row in M.rows]


def decode_matrix(obj, d: int = 0) -> Matrix:
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise DocumentError("matrix must be a list of rows")
    if obj and len({len(r) for r in obj}) != 1:
        raise DocumentError("matrix rows have different lengths")
    return Matrix([[decode_scalar(x, d) for x in r] for r in obj], d, ncols=len(obj[0]) if obj else 0)


def _vector(obj, d: int, length: int | None = None) -> tuple:
    if not isinstance(obj, list):
        raise DocumentError("vector must be a list")
    if length is not None and len(obj) != length:
        raise DocumentError(f"vector of length {len(obj)}, expected {length}")
    return tuple(decode_scalar(x, d) for x in obj)


# ---------------------------------------------------------------------------
# documents


def _header(kind: str, d: int) -> dict:
    return {"version": VERSION, "kind": kind, "d": d}


def algebra_document(g: GradedAlgebra) -> dict:
    doc = _header("algebra", g.d)
    doc["name"] = g.name
    doc["layers"] = list(g.layer_dims)
    doc["brackets"] = [[i, j, k, encode_scalar(c, g.d)] for i, j, k, c in g.triples()]
    if g.J is not None:
        doc["J"] = encode_matrix(g.J)
    if g.J_inherited is not None:
        doc["J_inherited"] = encode_matrix(g.J_inherited)
    return doc


def presentation_document(p: Presentation) -> dict:
    doc = _header("presentation", p.d)
    doc.update({"name": p.name, "F": p.F, "m": p.m, "n": p.n})
    doc["K"] = [[encode_scalar(x, p.d) for x in v] for v in p.K]
    return doc


def map_document(phi: GradedMap) -> dict:
    doc = _header("map", phi.d)
    if phi.source_layers != phi.target_layers:
        raise DocumentError("map documents hold maps from an algebra to itself")
    doc["layers"] = list(phi.source_layers)
    doc["blocks"] = [encode_matrix(B) for B in phi.blocks()]
    return doc


def form_document(alpha: Form | MultiVector) -> dict:
    kind = "form"
    doc = _header(kind, alpha.d)
    doc["n"] = alpha.n
    doc["degree"] = alpha.degree
    if isinstance(alpha, MultiVector):
        doc["multivector"] = True
    doc["terms"] = [[list(idx), encode_scalar(c, alpha.d)] for idx, c in alpha.items()]
    return doc


def vectors_document(vectors, n: int, d: int = 0) -> dict:
    doc = _header("vectors", d)
    doc["n"] = n
    doc["vectors"] = [[encode_scalar(x, d) for x in v] for v in vectors]
    return doc


def to_document(obj) -> dict:
    if isinstance(obj, GradedAlgebra):
        return algebra_document(obj)
    if isinstance(obj, Presentation):
        return presentation_document(obj)
    if isinstance(obj, GradedMap):
        return map_document(obj)
    if isinstance(obj, (Form, MultiVector)):
        return form_document(obj)
    raise TypeError(f"no document kind for {type(obj).__name__}")


def _require(doc: dict, keys: dict):
    for k, t in keys.items():
        if k not in doc:
            raise DocumentError(f"missing key {k!r}")
        if not isinstance(doc[k], t) or isinstance(doc[k], bool) and t is not bool:
            raise DocumentError(f"key {k!r} has the wrong type")


def from_document(doc: Any):
    """Parse a document dict into its object.  Raises :class:`DocumentError`."""
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    _require(doc, {"version": int, "kind": str, "d": int})
    if doc["version"] != VERSION:
        raise DocumentError(f"unsupported document version {doc['version']}")
    try:
        d = check_field_tag(doc["d"])
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc
    kind = doc["kind"]
    try:
        if kind == "algebra":
            return _parse_algebra(doc, d)
        if kind == "presentation":
            return _parse_presentation(doc, d)
        if kind == "map":
            return _parse_map(doc, d)
        if kind == "form":
            return _parse_form(doc, d)
        if kind == "vectors":
            return _parse_vectors(doc, d)
    except DocumentError:
        raise
    except (ValueError, TypeError, KeyError, IndexError) as exc:
        raise DocumentError(f"invalid {kind} document: {exc}") from exc
    raise DocumentError(f"unknown document kind {kind!r}")


def _parse_algebra(doc: dict, d: int) -> GradedAlgebra:
    _require(doc, {"layers": list, "brackets": list})
    layers = doc["layers"]
    if not all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in layers):
        raise DocumentError("layers must be non-negative integers")
    triples = []
    for t in doc["brackets"]:
        if not (isinstance(t, list) and len(t) == 4 and all(isinstance(x, int) and not isinstance(x, bool) for x in t[:3])):
            raise DocumentError("brackets must be [i, j, k, scalar] entries")
        if t[0] == t[1]:
            raise DocumentError(f"bracket entry [{t[0]}, {t[1]}] of an element with itself")
        triples.append((t[0], t[1], t[2], decode_scalar(t[3], d)))
    J = decode_matrix(doc["J"], d) if "J" in doc else None
    J_inh = decode_matrix(doc["J_inherited"], d) if "J_inherited" in doc else None
    return GradedAlgebra.from_triples(layers, triples, d, J=J, J_inherited=J_inh, name=doc.get("name", ""))


def _parse_presentation(doc: dict, d: int) -> Presentation:
    _require(doc, {"F": str, "m": int, "n": int, "K": list})
    if doc["F"] not in (REAL, COMPLEX):
        raise DocumentError("F must be 'real' or 'complex'")
    width = 1 if doc["F"] == REAL else 2
    K = tuple(_vector(v, d, doc["n"] * width) for v in doc["K"])
    return Presentation(doc["F"], doc["m"], doc["n"], K, d, doc.get("name", ""))


def _parse_map(doc: dict, d: int) -> GradedMap:
    _require(doc, {"blocks": list})
    blocks = [decode_matrix(b, d) for b in doc["blocks"]]
    for B in blocks:
        if B.nrows != B.ncols:
            raise DocumentError("map blocks must be square")
    if "layers" in doc and list(doc["layers"]) != [B.nrows for B in blocks]:
        raise DocumentError("layers do not match the block sizes")
    return GradedMap.from_blocks(blocks, d)


def _parse_form(doc: dict, d: int):
    _require(doc, {"n": int, "degree": int, "terms": list})
    n, k = doc["n"], doc["degree"]
    terms = {}
    for entry in doc["terms"]:
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], list)):
            raise DocumentError("form terms must be [index list, coefficient] pairs")
        idx = entry[0]
        if sorted(set(idx)) != idx or len(idx) != k or any(not 0 <= i < n for i in idx):
            raise DocumentError(f"index set {idx} must be strictly increasing, of size {k}, within 0..{n - 1}")
        terms[mask_of(idx)] = decode_coefficient(entry[1], d)
    cls = MultiVector if doc.get("multivector") else Form
    return cls(n, k, terms, d)


def _parse_vectors(doc: dict, d: int) -> list[tuple]:
    _require(doc, {"n": int, "vectors": list})
    return [_vector(v, d, doc["n"]) for v in doc["vectors"]]


# ---------------------------------------------------------------------------
# text


def dumps(doc: dict) -> str:
    """Canonical serialization."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid JSON: {exc}") from exc
    return from_document(doc)


def load_file(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def jsonable(obj, d: int = 0):
    """Convert report values (scalars, matrices, subspaces, tuples) to JSON data."""
    if isinstance(obj, (FieldElement, LinearCoeff)):
        dd = obj.d
        return encode_scalar(obj, dd)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        if math.isinf(obj):
            return "-inf" if obj < 0 else "inf"
        return obj
    if isinstance(obj, Matrix):
        return encode_matrix(obj)
    if isinstance(obj, Subspace):
        return {"dim": obj.dim, "basis": [jsonable(v) for v in obj.basis]}
    if isinstance(obj, GradedMap):
        return map_document(obj)
    if isinstance(obj, (Form, MultiVector)):
        return form_document(obj)
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = list(obj)
        if isinstance(obj, (set, frozenset)):
            items = sorted(items, key=repr)
        return [jsonable(v) for v in items]
    return obj

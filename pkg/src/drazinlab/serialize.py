"""JSON codecs for matrices and quadruples.

Matrix documents look like::

    {"field": "rational", "rows": [["1/2", 0], [3, "-4/5"]]}
    {"field": "gfp", "p": 5, "rows": [[1, 4], [0, 2]]}
    {"field": "complex", "rows": [[[1.0, 0.5], [0.0, 0.0]], ...]}
"""

from __future__ import annotations

from .fields import Field, field_from_json
from .linalg import Matrix


def matrix_to_json(A: Matrix) -> dict:
    enc = A.field.encode
    doc = A.field.to_json()
    doc["rows"] = [[enc(x) for x in r] for r in A.rows]
    return doc


def matrix_from_json(doc: dict, eps_rel: float | None = None, field: Field | None = None) -> Matrix:
    if not isinstance(doc, dict):
        raise ValueError("matrix document must be a JSON object")
    F = field_from_json(doc, eps_rel) if field is None else field
    if field is not None and doc.get("field") != F.name:
        raise ValueError(f"expected field {F.name!r}, got {doc.get('field')!r}")
    rows = doc.get("rows")
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ValueError("'rows' must be a non-empty list of lists")
    ncols = len(rows[0])
    if ncols == 0 or any(len(r) != ncols for r in rows):
        raise ValueError("'rows' must be rectangular and non-empty")
    return Matrix._raw(F, [[F.decode(x) for x in r] for r in rows], ncols)


def quadruple_to_json(q) -> dict:
    doc = {k: matrix_to_json(getattr(q, k)) for k in "abc"}
    if q.d is not None:
        doc["d"] = matrix_to_json(q.d)
    return doc


def quadruple_from_json(doc: dict, eps_rel: float | None = None, provenance: str = "user"):
    from .identities import Quadruple

    if not isinstance(doc, dict):
        raise ValueError("quadruple document must be a JSON object")
    missing = [k for k in "abc" if k not in doc]
    if missing:
        raise ValueError(f"quadruple is missing {', '.join(missing)}")
    mats = {k: matrix_from_json(doc[k], eps_rel) for k in "abcd" if doc.get(k) is not None}
    return Quadruple(mats["a"], mats["b"], mats["c"], mats.get("d"), provenance=provenance)

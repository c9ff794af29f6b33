"""JSON documents for algebras, triangular specs, maps and reports.

Rationals are always written as strings, "p/q" or "p".
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .algebra import Algebra, LinearMap
from .linalg import as_fraction
from .triangular import Bimodule, TriangularAlgebra, build_triangular


class DocumentError(ValueError):
    pass


def rat(x: Fraction) -> str:
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rat(s: Any) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise DocumentError(f"rationals must be strings like 'p/q', got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad rational {s!r}") from exc


def _nested(x, fn):
    if isinstance(x, (list, tuple)):
        return [_nested(y, fn) for y in x]
    return fn(x)


def algebra_to_json(a: Algebra) -> dict:
    doc = {
        "dim": a.dim,
        "unit": [rat(x) for x in a.unit] if a.unit is not None else None,
        "structure": _nested(a.structure, rat),
    }
    if a.labels:
        doc["labels"] = list(a.labels)
    return doc


def algebra_from_json(doc: dict) -> Algebra:
    try:
        dim = int(doc["dim"])
        unit = doc.get("unit")
        structure = _nested(doc["structure"], parse_rat)
        return Algebra(dim, structure, [parse_rat(x) for x in unit] if unit is not None else None, doc.get("labels"))
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed algebra document: {exc}") from exc


def bimodule_to_json(m: Bimodule) -> dict:
    return {
        "dimM": m.dimM,
        "left_action": _nested(m.left_action, rat),
        "right_action": _nested(m.right_action, rat),
    }


def triangular_to_json(t: TriangularAlgebra) -> dict:
    return {"A": algebra_to_json(t.A), "B": algebra_to_json(t.B), "M": bimodule_to_json(t.M)}


def triangular_from_json(doc: dict, labels=None) -> TriangularAlgebra:
    try:
        A = algebra_from_json(doc["A"])
        B = algebra_from_json(doc["B"])
        m = doc["M"]
        M = Bimodule(int(m["dimM"]), _nested(m["left_action"], parse_rat), _nested(m["right_action"], parse_rat))
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"malformed triangular document: {exc}") from exc
    return build_triangular(A, B, M, labels)


def map_to_json(f: LinearMap) -> dict:
    return {"dim": f.dim, "matrix": _nested(f.matrix, rat)}


def map_from_json(doc: dict) -> LinearMap:
    try:
        return LinearMap(_nested(doc["matrix"], parse_rat))
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed map document: {exc}") from exc


def fingerprint(a: Algebra) -> str:
    blob = json.dumps(algebra_to_json(a), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def load_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: not valid JSON ({exc.msg})") from exc


def load_algebra_document(doc: dict) -> Algebra | TriangularAlgebra:
    """A triangular spec (with A, B, M) or a plain algebra document."""
    if "components" in doc:
        # a file written by `algebra build`: keep its labels so the fingerprint is stable
        return triangular_from_json(doc["components"], doc.get("labels"))
    if all(k in doc for k in ("A", "B", "M")):
        return triangular_from_json(doc)
    if "algebra" in doc and isinstance(doc["algebra"], dict):
        return algebra_from_json(doc["algebra"])
    return algebra_from_json(doc)


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2) + "\n"

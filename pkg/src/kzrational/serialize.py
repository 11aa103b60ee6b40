"""JSON documents for systems and solutions.

Rationals travel as strings ``"p/q"`` (``"p"`` for integers), never as
floats.  Parse errors carry the path of the offending field, or the line and
column for malformed JSON.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import DuplicatePoles, KZError, ParseError
from .exactalg import RatMatrix, as_rational
from .kzsystem import KZSystem
from .ratfunc import RatMatFunc

SYSTEM_FORMAT = "kzrational/system"
SOLUTION_FORMAT = "kzrational/solution"
VERSION = 1


def rational_to_str(x: Fraction) -> str:
    x = as_rational(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(obj: Any, path: str) -> Fraction:
    if isinstance(obj, bool) or isinstance(obj, float):
        raise ParseError(f"expected an exact rational string, got {obj!r}", path)
    if isinstance(obj, int):
        return Fraction(obj)
    if not isinstance(obj, str):
        raise ParseError(f"expected an exact rational string, got {type(obj).__name__}", path)
    try:
        return as_rational(obj)
    except ValueError:
        raise ParseError(f"invalid rational {obj!r}", path) from None


def matrix_to_json(M: RatMatrix) -> list[list[str]]:
    return [[rational_to_str(e) for e in row] for row in M.tolist()]


def parse_matrix(obj: Any, path: str, shape: tuple[int, int] | None = None) -> RatMatrix:
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise ParseError("expected a matrix (array of arrays)", path)
    rows = [[parse_rational(e, f"{path}[{i}][{j}]") for j, e in enumerate(r)]
            for i, r in enumerate(obj)]
    if shape is not None:
        if len(rows) != shape[0]:
            raise ParseError(f"expected {shape[0]} rows, got {len(rows)}", path)
        for i, r in enumerate(rows):
            if len(r) != shape[1]:
                raise ParseError(f"expected {shape[1]} entries, got {len(r)}", f"{path}[{i}]")
    elif rows and any(len(r) != len(rows[0]) for r in rows):
        raise ParseError("ragged matrix", path)
    if not rows:
        return RatMatrix.zeros(0, shape[1] if shape else 0)
    return RatMatrix(rows)


def _require(doc: dict, key: str, kind, path: str = ""):
    if key not in doc:
        raise ParseError(f"missing field {key!r}", path or key)
    val = doc[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise ParseError(f"expected an integer, got {val!r}", key)
    if kind is not int and not isinstance(val, kind):
        raise ParseError(f"expected {kind.__name__}, got {type(val).__name__}", key)
    return val


def _check_format(doc: Any, expected: str):
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    fmt = doc.get("format", expected)
    if fmt != expected:
        raise ParseError(f"expected format {expected!r}, got {fmt!r}", "format")


def system_to_doc(system: KZSystem, metadata: dict | None = None) -> dict:
    doc = {
        "format": SYSTEM_FORMAT,
        "version": VERSION,
        "n": system.n,
        "rho": system.rho,
        "poles": [rational_to_str(z) for z in system.poles],
        "residues": [matrix_to_json(P) for P in system.residues],
    }
    if metadata:
        doc["metadata"] = dict(metadata)
    return doc


def system_from_doc(doc: Any) -> tuple[KZSystem, dict]:
    """Parse a system document; returns the system and its metadata."""
    _check_format(doc, SYSTEM_FORMAT)
    n = _require(doc, "n", int)
    if n < 1:
        raise ParseError("n must be positive", "n")
    rho = _require(doc, "rho", int)
    poles_raw = _require(doc, "poles", list)
    res_raw = _require(doc, "residues", list)
    if len(res_raw) != len(poles_raw):
        raise ParseError(f"{len(poles_raw)} poles but {len(res_raw)} residues", "residues")
    poles = [parse_rational(z, f"poles[{i}]") for i, z in enumerate(poles_raw)]
    residues = [parse_matrix(m, f"residues[{k}]", (n, n)) for k, m in enumerate(res_raw)]
    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise ParseError("metadata must be an object", "metadata")
    try:
        system = KZSystem(tuple(poles), tuple(residues), rho)
    except KZError as exc:
        where = "poles" if isinstance(exc, DuplicatePoles) else "rho" if "rho" in str(exc) else ""
        raise ParseError(str(exc), where) from None
    return system, metadata


def solution_to_doc(F: RatMatFunc, side: str = "right", metadata: dict | None = None) -> dict:
    doc = {
        "format": SOLUTION_FORMAT,
        "version": VERSION,
        "side": side,
        "shape": [F.rows, F.cols],
        "pole_parts": [
            {"pole": rational_to_str(a), "coefficients": [matrix_to_json(c) for c in cs]}
            for a, cs in F.pole_parts.items()
        ],
        "poly_part": [matrix_to_json(c) for c in F.poly_part],
    }
    if metadata:
        doc["metadata"] = dict(metadata)
    return doc


def solution_from_doc(doc: Any) -> tuple[RatMatFunc, str]:
    """Parse a solution document; returns the function and its side."""
    _check_format(doc, SOLUTION_FORMAT)
    shape_raw = _require(doc, "shape", list)
    if len(shape_raw) != 2 or not all(isinstance(x, int) and x >= 0 for x in shape_raw):
        raise ParseError("shape must be [rows, cols]", "shape")
    shape = (shape_raw[0], shape_raw[1])
    side = doc.get("side", "right")
    if side not in ("right", "left"):
        raise ParseError(f"side must be 'right' or 'left', got {side!r}", "side")
    parts = {}
    for i, entry in enumerate(_require(doc, "pole_parts", list)):
        path = f"pole_parts[{i}]"
        if not isinstance(entry, dict) or "pole" not in entry or "coefficients" not in entry:
            raise ParseError("expected an object with 'pole' and 'coefficients'", path)
        a = parse_rational(entry["pole"], f"{path}.pole")
        if a in parts:
            raise ParseError(f"pole {a} listed twice", f"{path}.pole")
        coeffs = entry["coefficients"]
        if not isinstance(coeffs, list):
            raise ParseError("coefficients must be an array", f"{path}.coefficients")
        parts[a] = [parse_matrix(c, f"{path}.coefficients[{p}]", shape)
                    for p, c in enumerate(coeffs)]
    poly_raw = _require(doc, "poly_part", list)
    poly = [parse_matrix(c, f"poly_part[{j}]", shape) for j, c in enumerate(poly_raw)]
    return RatMatFunc(shape, parts, poly), side


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None


def load(path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", str(path)) from None
    return loads(text)


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2) + "\n"


def load_system(path) -> tuple[KZSystem, dict]:
    return system_from_doc(load(path))


def load_solution(path) -> tuple[RatMatFunc, str]:
    return solution_from_doc(load(path))

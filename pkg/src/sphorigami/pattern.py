"""JSON pattern documents: sheet, creases, vertex patterns and 3D fold parameters.

Floats are written with Python's shortest round-trip representation, which
reads back to the identical double. Every point or pole is checked for unit
length on read; problems raise :class:`ParseError` naming the offending
field and, for syntax errors, the line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError
from .sphere_core import DEFAULT_TOL

SCHEMA_VERSION = "sphorigami.pattern/1"


@dataclass
class CreaseRecord:
    start: np.ndarray
    end: np.ndarray
    pole: np.ndarray
    kind: str = "geodesic"  # or "small"
    step: int = 0
    height: float = 0.0  # plane offset of a small-circle crease


@dataclass
class FoldRecord:
    p: np.ndarray
    q: np.ndarray
    theta: float


@dataclass
class PatternDocument:
    """Everything the CLI reads or writes about a crease pattern.

    ``sheet`` is ``{"type": "digon", "inner_angle": beta}`` or
    ``{"type": "face", "vertices": [...], "edge_poles": [...]}``. ``points``
    and ``lines`` (great-circle poles) are the inputs of axiom queries.
    """

    sheet: dict = field(default_factory=lambda: {"type": "digon", "inner_angle": np.pi})
    creases: list = field(default_factory=list)
    vertex_patterns: list = field(default_factory=list)  # (vertex, ends) pairs
    folds: list = field(default_factory=list)
    points: list = field(default_factory=list)
    lines: list = field(default_factory=list)
    version: str = SCHEMA_VERSION


def _vec(v):
    return [float(x) for x in np.asarray(v, dtype=float)]


def to_dict(doc):
    sheet = dict(doc.sheet)
    if sheet.get("type") == "face":
        sheet["vertices"] = [_vec(v) for v in sheet["vertices"]]
        sheet["edge_poles"] = [None if a is None else _vec(a) for a in sheet.get("edge_poles") or []]
    elif "inner_angle" in sheet:
        sheet["inner_angle"] = float(sheet["inner_angle"])
    return {
        "version": doc.version,
        "sheet": sheet,
        "creases": [
            {
                "kind": c.kind,
                "start": _vec(c.start),
                "end": _vec(c.end),
                "pole": _vec(c.pole),
                "height": float(c.height),
                "step": int(c.step),
            }
            for c in doc.creases
        ],
        "vertex_patterns": [{"vertex": _vec(v), "ends": [_vec(e) for e in ends]} for v, ends in doc.vertex_patterns],
        "folds": [{"p": _vec(f.p), "q": _vec(f.q), "theta": float(f.theta)} for f in doc.folds],
        "points": [_vec(p) for p in doc.points],
        "lines": [_vec(a) for a in doc.lines],
    }


def dumps(doc):
    return json.dumps(to_dict(doc), indent=2, allow_nan=False) + "\n"


def write_pattern(doc, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))
    return path


def _unit(value, name, tol=DEFAULT_TOL):
    if not isinstance(value, list) or len(value) != 3:
        raise ParseError("expected a list of three numbers", field=name)
    try:
        v = np.array([float(x) for x in value])
    except (TypeError, ValueError):
        raise ParseError("expected a list of three numbers", field=name) from None
    if not np.all(np.isfinite(v)) or abs(np.linalg.norm(v) - 1.0) > tol.unit:
        raise ParseError(f"not a unit vector (norm {np.linalg.norm(v):.17g})", field=name)
    return v


def _number(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError("expected a number", field=name)
    return float(value)


def _list(data, key, where=""):
    value = data.get(key, [])
    if not isinstance(value, list):
        raise ParseError("expected a list", field=where + key)
    return value


def from_dict(data, tol=DEFAULT_TOL):
    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    version = data.get("version")
    if version != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema version {version!r}, expected {SCHEMA_VERSION!r}", field="version")
    sheet = data.get("sheet", {"type": "digon", "inner_angle": np.pi})
    if not isinstance(sheet, dict):
        raise ParseError("expected an object", field="sheet")
    kind = sheet.get("type")
    if kind == "digon":
        beta = _number(sheet.get("inner_angle"), "sheet.inner_angle")
        if not 0.0 < beta <= np.pi + tol.align:
            raise ParseError("inner angle must lie in (0, pi]", field="sheet.inner_angle")
        sheet = {"type": "digon", "inner_angle": beta}
    elif kind == "face":
        verts = [_unit(v, f"sheet.vertices[{i}]", tol) for i, v in enumerate(_list(sheet, "vertices", "sheet."))]
        poles = _list(sheet, "edge_poles", "sheet.")
        if poles and len(poles) != len(verts):
            raise ParseError("need one entry per vertex", field="sheet.edge_poles")
        poles = [None if a is None else _unit(a, f"sheet.edge_poles[{i}]", tol) for i, a in enumerate(poles)]
        sheet = {"type": "face", "vertices": verts, "edge_poles": poles}
    else:
        raise ParseError(f"unknown sheet type {kind!r}", field="sheet.type")
    creases = []
    for i, c in enumerate(_list(data, "creases")):
        where = f"creases[{i}]"
        if not isinstance(c, dict):
            raise ParseError("expected an object", field=where)
        ckind = c.get("kind", "geodesic")
        if ckind not in ("geodesic", "small"):
            raise ParseError(f"unknown crease kind {ckind!r}", field=where + ".kind")
        step = c.get("step", 0)
        if isinstance(step, bool) or not isinstance(step, int):
            raise ParseError("expected an integer", field=where + ".step")
        creases.append(
            CreaseRecord(
                _unit(c.get("start"), where + ".start", tol),
                _unit(c.get("end"), where + ".end", tol),
                _unit(c.get("pole"), where + ".pole", tol),
                ckind,
                step,
                _number(c.get("height", 0.0), where + ".height"),
            )
        )
    patterns = []
    for i, vp in enumerate(_list(data, "vertex_patterns")):
        where = f"vertex_patterns[{i}]"
        if not isinstance(vp, dict):
            raise ParseError("expected an object", field=where)
        v = _unit(vp.get("vertex"), where + ".vertex", tol)
        ends = [_unit(e, f"{where}.ends[{j}]", tol) for j, e in enumerate(_list(vp, "ends", where + "."))]
        patterns.append((v, ends))
    folds = []
    for i, f in enumerate(_list(data, "folds")):
        where = f"folds[{i}]"
        if not isinstance(f, dict):
            raise ParseError("expected an object", field=where)
        folds.append(
            FoldRecord(
                _unit(f.get("p"), where + ".p", tol),
                _unit(f.get("q"), where + ".q", tol),
                _number(f.get("theta"), where + ".theta"),
            )
        )
    points = [_unit(p, f"points[{i}]", tol) for i, p in enumerate(_list(data, "points"))]
    lines = [_unit(a, f"lines[{i}]", tol) for i, a in enumerate(_list(data, "lines"))]
    return PatternDocument(sheet, creases, patterns, folds, points, lines, version)


def loads(text, tol=DEFAULT_TOL):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    return from_dict(data, tol)


def read_pattern(path, tol=DEFAULT_TOL):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), tol)


def documents_equal(a, b, atol=1e-12):
    """Field-by-field comparison with an absolute tolerance on numbers."""
    return _close(to_dict(a), to_dict(b), atol)


def _close(x, y, atol):
    if isinstance(x, dict):
        return isinstance(y, dict) and x.keys() == y.keys() and all(_close(x[k], y[k], atol) for k in x)
    if isinstance(x, list):
        return isinstance(y, list) and len(x) == len(y) and all(_close(u, v, atol) for u, v in zip(x, y))
    if isinstance(x, float) or isinstance(y, float):
        return abs(float(x) - float(y)) <= atol
    return x == y


__all__ = [
    "CreaseRecord",
    "FoldRecord",
    "PatternDocument",
    "SCHEMA_VERSION",
    "documents_equal",
    "dumps",
    "from_dict",
    "loads",
    "read_pattern",
    "to_dict",
    "write_pattern",
]

import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphorigami.bird_models import DigonSheet, digon_foldout
from sphorigami.errors import ParseError
from sphorigami.pattern import (
    SCHEMA_VERSION,
    CreaseRecord,
    FoldRecord,
    PatternDocument,
    documents_equal,
    dumps,
    loads,
    read_pattern,
    write_pattern,
)
from sphorigami.sphere_core import random_unit


def _bird_document(beta):
    d = digon_foldout(DigonSheet(beta))
    creases = [
        CreaseRecord(c.arc.start, c.arc.end, c.mirror.pole, step=c.step) for c in d.creases
    ]
    patterns = []
    for name in d.interior_vertices():
        vp = d.vertex_pattern(name)
        patterns.append((vp.vertex, list(vp.ends)))
    return PatternDocument({"type": "digon", "inner_angle": beta}, creases, patterns)


def test_bird_pattern_round_trips_exactly(tmp_path):
    doc = _bird_document(np.pi / 3)
    path = write_pattern(doc, tmp_path / "bird.json")
    back = read_pattern(path)
    assert documents_equal(doc, back, atol=0.0)
    assert dumps(back) == dumps(doc)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-1.5, 1.5), st.floats(1e-3, np.pi))
def test_random_documents_round_trip(seed, theta, beta):
    rng = np.random.default_rng(seed)
    p, q, a, v, e1, e2 = random_unit(rng, 6)
    doc = PatternDocument(
        {"type": "digon", "inner_angle": beta},
        [CreaseRecord(p, q, a, kind="small", step=3, height=0.25)],
        [(v, [e1, e2])],
        [FoldRecord(p, q, theta)],
        [p, q],
        [a],
    )
    assert documents_equal(loads(dumps(doc)), doc, atol=0.0)


def test_face_sheet_keeps_missing_poles():
    x, y, z = np.eye(3)
    doc = PatternDocument({"type": "face", "vertices": [x, y, z], "edge_poles": [None, z, None]})
    back = loads(dumps(doc))
    assert back.sheet["edge_poles"][0] is None
    assert np.array_equal(back.sheet["edge_poles"][1], z)


def _base():
    return json.loads(dumps(_bird_document(np.pi / 2)))


def test_non_unit_pole_names_the_field():
    data = _base()
    data["creases"][2]["pole"] = [1.0, 1.0, 0.0]
    with pytest.raises(ParseError) as exc:
        loads(json.dumps(data))
    assert exc.value.field == "creases[2].pole"
    assert "creases[2].pole" in str(exc.value)


@pytest.mark.parametrize(
    "mutate, field",
    [
        (lambda d: d.update(version="other/9"), "version"),
        (lambda d: d["sheet"].update(inner_angle=4.0), "sheet.inner_angle"),
        (lambda d: d["sheet"].update(type="torus"), "sheet.type"),
        (lambda d: d["creases"][0].update(kind="spiral"), "creases[0].kind"),
        (lambda d: d["creases"][1].update(step=1.5), "creases[1].step"),
        (lambda d: d["vertex_patterns"][0]["ends"].__setitem__(1, [0, 0]), "vertex_patterns[0].ends[1]"),
        (lambda d: d.update(folds=[{"p": [1, 0, 0], "q": [0, 1, 0], "theta": "big"}]), "folds[0].theta"),
        (lambda d: d.update(points={}), "points"),
    ],
)
def test_bad_fields_are_reported(mutate, field):
    data = _base()
    mutate(data)
    with pytest.raises(ParseError) as exc:
        loads(json.dumps(data))
    assert exc.value.field == field


def test_syntax_error_reports_line():
    text = dumps(_bird_document(np.pi / 2)).splitlines()
    text[4] = text[4] + ","
    with pytest.raises(ParseError) as exc:
        loads("\n".join(text))
    assert exc.value.line is not None and exc.value.line >= 5


def test_schema_version_written():
    assert json.loads(dumps(PatternDocument()))["version"] == SCHEMA_VERSION


def test_documented_example_parses():
    text = (Path(__file__).parents[1] / "docs" / "pattern_schema.md").read_text()
    block = text.split("## Example")[1].split("```json")[1].split("```")[0]
    doc = loads(block)
    assert doc.sheet["type"] == "face" and len(doc.vertex_patterns) == 1 and doc.folds[0].theta == -0.4

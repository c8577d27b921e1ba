"""Command-line interface: ``sphorigami <command> ...``.

Exit codes: 0 success, 1 "not foldable" (kawasaki), 2 invalid or degenerate
input, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import axioms
from .bird_models import BirdParams, DigonSheet, build_bird
from .errors import ParseError, SphericalOrigamiError, ValidationError
from .flat_fold import VertexPattern, fold_oracle, ftiling_check, kawasaki_check
from .fold3d import SphericalFace, fold_curve_on_edge, fold_face
from .mesh import TriangleMesh, export_obj, tessellate_face
from .pattern import read_pattern
from .sphere_core import DEFAULT_TOL, random_unit

EXIT_OK, EXIT_NOT_FOLDABLE, EXIT_INVALID, EXIT_USAGE = 0, 1, 2, 64

# (number of points, number of lines) taken from the document, in solver order
AXIOM_INPUTS = {1: (2, 0), 2: (2, 0), 3: (0, 2), 4: (1, 1), 5: (2, 1), 6: (2, 2), 7: (1, 2)}
EMPTY_ALLOWED = {5, 6, 7}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _common(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--tolerance", type=float, default=default, help="alignment tolerance override")
    parser.add_argument("--seed", type=int, default=default if suppress else 0, help="seed for randomized sweeps")


def build_parser():
    parser = _Parser(prog="sphorigami", description="Spherical origami toolkit.")
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("axiom", help="solve one of the seven fold axioms")
    p.add_argument("axiom_id", type=int, choices=range(1, 8), metavar="{1..7}")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    _common(p, suppress=True)

    p = sub.add_parser("kawasaki", help="flat-foldability of the document's vertex patterns")
    p.add_argument("--input", required=True)
    _common(p, suppress=True)

    p = sub.add_parser("fold3d", help="fold a face across a small-circle fold curve")
    p.add_argument("--input", required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--resolution", type=int, default=16)
    _common(p, suppress=True)

    p = sub.add_parser("bird", help="build a spherical origami bird mesh")
    p.add_argument("--angle", type=float, required=True)
    p.add_argument("--wing-theta", type=float, required=True)
    p.add_argument("--resolution", type=int, default=16)
    p.add_argument("--out", required=True)
    _common(p, suppress=True)

    p = sub.add_parser("verify", help="randomized self-check of solvers and checkers")
    p.add_argument("--count", type=int, default=200)
    _common(p, suppress=True)
    return parser


def _tolerances(args):
    if args.tolerance is None:
        return DEFAULT_TOL
    if not args.tolerance > 0:
        raise ValidationError("--tolerance must be positive")
    return DEFAULT_TOL.scaled(args.tolerance)


def _cmd_axiom(args, tol, out):
    doc = read_pattern(args.input, tol)
    n_pts, n_lines = AXIOM_INPUTS[args.axiom_id]
    if len(doc.points) < n_pts or len(doc.lines) < n_lines:
        raise ValidationError(f"axiom {args.axiom_id} needs {n_pts} points and {n_lines} lines in the document")
    inputs = tuple(doc.points[:n_pts]) + tuple(doc.lines[:n_lines])
    sols = axioms.solve(args.axiom_id, *inputs, tol=tol)
    records = []
    for s in sols:
        res = {k: float(v) for k, v in axioms.residuals(args.axiom_id, inputs, s).items()}
        records.append({"pole": [float(x) + 0.0 for x in s.pole], "residuals": res})
    payload = {"axiom": args.axiom_id, "count": len(records), "solutions": records}
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    print(f"axiom {args.axiom_id}: {len(records)} solution(s)", file=out)
    if not records and args.axiom_id not in EMPTY_ALLOWED:
        return EXIT_INVALID
    return EXIT_OK


def _cmd_kawasaki(args, tol, out):
    doc = read_pattern(args.input, tol)
    if not doc.vertex_patterns:
        raise ValidationError("document has no vertex patterns")
    ok = True
    for i, (v, ends) in enumerate(doc.vertex_patterns):
        pattern = VertexPattern(v, np.array(ends))
        res = kawasaki_check(pattern, tol)
        verdict = "foldable" if res.foldable else "not foldable"
        parity = "even" if res.even else "odd"
        print(f"vertex {i}: {verdict}; alternating sum {res.alternating_sum:.17g}; {res.n} creases ({parity})", file=out)
        ok = ok and res.foldable
    return EXIT_OK if ok else EXIT_NOT_FOLDABLE


def _sheet_face(doc):
    if doc.sheet["type"] == "digon":
        return DigonSheet(doc.sheet["inner_angle"]).face()
    poles = doc.sheet.get("edge_poles") or None
    return SphericalFace(np.array(doc.sheet["vertices"]), tuple(poles) if poles else None)


def _cmd_fold3d(args, tol, out):
    doc = read_pattern(args.input, tol)
    face = _sheet_face(doc)
    if doc.folds:
        p, q = doc.folds[0].p, doc.folds[0].q
        i, j = face.index_of(p), face.index_of(q)
        edge = i if (i + 1) % len(face) == j else j
    else:
        edge = 0
    curve = fold_curve_on_edge(face, edge, args.theta, tol)
    folded = fold_face(face, curve, tol=tol)
    before = tessellate_face(face, args.resolution, "before")
    after = tessellate_face(folded.image, args.resolution, "after")
    export_obj([before, after], args.out)
    print(f"folded edge {edge} with theta {args.theta:.12g}; wrote {args.out}", file=out)
    return EXIT_OK


def _cmd_bird(args, tol, out):
    bird = build_bird(BirdParams(args.angle, args.wing_theta), tol)
    meshes = [tessellate_face(face, args.resolution, label) for label, face in bird.faces]
    export_obj(TriangleMesh.merge(meshes, by_label=True), args.out)
    chords = ", ".join(f"{k} {v:.12g}" for k, v in bird.wing_chords.items())
    print(f"bird with inner angle {args.angle:.12g}: {len(bird.faces)} faces; wing chords {chords}", file=out)
    return EXIT_OK


def _cmd_verify(args, tol, out):
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    mismatches = 0
    for _ in range(args.count):
        p1, p2 = random_unit(rng, 2)
        for axiom_id, inputs in ((1, (p1, p2)), (2, (p1, p2))):
            for s in axioms.solve(axiom_id, *inputs, tol=tol):
                worst = max(worst, max(axioms.residuals(axiom_id, inputs, s).values()))
        n = int(rng.choice([2, 4, 6, 8]))
        angles = rng.dirichlet(np.ones(n)) * 2 * np.pi
        pattern = VertexPattern.from_angles(random_unit(rng), angles)
        verdicts = {bool(kawasaki_check(pattern, tol)), ftiling_check(pattern, tol), fold_oracle(pattern, tol)}
        mismatches += len(verdicts) > 1
    print(f"seed {args.seed}: worst axiom residual {worst:.3g}; checker disagreements {mismatches}", file=out)
    return EXIT_OK if worst < tol.align and mismatches == 0 else EXIT_NOT_FOLDABLE


COMMANDS = {
    "axiom": _cmd_axiom,
    "kawasaki": _cmd_kawasaki,
    "fold3d": _cmd_fold3d,
    "bird": _cmd_bird,
    "verify": _cmd_verify,
}


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=err)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        tol = _tolerances(args)
        return COMMANDS[args.command](args, tol, out)
    except (ParseError, ValidationError) as exc:
        print(f"invalid input: {exc}", file=err)
        return EXIT_INVALID
    except SphericalOrigamiError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O error: {exc}", file=err)
        return EXIT_INVALID


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()

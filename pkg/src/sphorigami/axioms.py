"""Huzita-Justin one-fold axioms on the unit sphere.

Each ``axiomN`` function returns a :class:`FoldSolutionSet` whose solutions
are great circles (fold curves). Folding across a circle is reflection in
its plane, so every solution can be checked by reflecting the inputs and
testing the alignments the axiom asks for; :func:`residuals` does exactly
that and is what the tests and the CLI report.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import AntipodalError, CoincidentCirclesError, DegenerateInputError, ValidationError
from .sphere_core import (
    GreatCircle,
    SmallCircle,
    _circle_roots,
    _grid,
    _rot,
    _rot_many,
    _tol,
    as_pole,
    canonical_pole,
    great_great_intersections,
    great_small_intersections,
    midpoint,
    pole_through,
    reflect,
    unit_point,
)

MAX_SOLUTIONS = {1: 1, 2: 1, 3: 2, 4: 1, 5: 2, 6: None, 7: 1}


@dataclass(frozen=True)
class FoldSolutionSet:
    axiom_id: int
    solutions: tuple  # of GreatCircle, sorted by canonical pole

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def __getitem__(self, i):
        return self.solutions[i]

    @property
    def poles(self):
        return np.array([s.pole for s in self.solutions]).reshape(-1, 3)


def _solution_set(axiom_id, poles, tol):
    circles = []
    for p in poles:
        c = GreatCircle(p / np.linalg.norm(p))
        if any(_pole_gap(c.pole, o.pole) < tol.dedup for o in circles):
            continue
        circles.append(c)
    circles.sort(key=lambda c: tuple(np.round(c.pole, 12)))
    return FoldSolutionSet(axiom_id, tuple(circles))


def _pole_gap(a, b):
    """Angular distance between two poles, treating +a and -a as equal."""
    return float(np.arccos(np.clip(abs(float(a @ b)), 0.0, 1.0)))


# -- alignments -------------------------------------------------------------


class AlignmentKind(str, Enum):
    POINT_POINT = "point-point"
    LINE_LINE = "line-line"
    POINT_LINE = "point-line"


@dataclass(frozen=True, eq=False)
class AlignmentSpec:
    kind: AlignmentKind
    first: object
    second: object


def check_alignment(spec, tol=None):
    """Point-point, line-line (sign-insensitive) or point-line alignment."""
    tol = _tol(tol)
    kind = AlignmentKind(spec.kind)
    if kind is AlignmentKind.POINT_POINT:
        a, b = unit_point(spec.first, tol), unit_point(spec.second, tol)
        return bool(np.all(np.abs(a - b) < tol.align))
    if kind is AlignmentKind.LINE_LINE:
        a, b = as_pole(spec.first, tol), as_pole(spec.second, tol)
        return bool(np.all(np.abs(a - b) < tol.align) or np.all(np.abs(a + b) < tol.align))
    p, a = unit_point(spec.first, tol), as_pole(spec.second, tol)
    return abs(float(p @ a)) < tol.align


def crossing_angle(c1, c2):
    """Angle in [0, pi/2] at which two great circles cross.

    Measured from the tangent vectors of both circles at one of their common
    points, so it does not rely on the pole dot product.
    """
    a, b = as_pole(c1), as_pole(c2)
    q, _ = great_great_intersections(a, b)
    t1, t2 = np.cross(a, q), np.cross(b, q)
    c = abs(float(t1 @ t2)) / (np.linalg.norm(t1) * np.linalg.norm(t2))
    return float(np.arccos(np.clip(c, 0.0, 1.0)))


# -- closed-form axioms -------------------------------------------------------


def axiom1(p1, p2, tol=None):
    """Fold through two points."""
    tol = _tol(tol)
    try:
        a = pole_through(p1, p2, tol)
    except AntipodalError as exc:
        raise DegenerateInputError("axiom 1 needs two distinct, non-antipodal points") from exc
    return _solution_set(1, [a], tol)


def axiom2(p1, p2, tol=None):
    """Fold p1 onto p2: the perpendicular bisector."""
    tol = _tol(tol)
    try:
        a12 = pole_through(p1, p2, tol)
    except AntipodalError as exc:
        raise DegenerateInputError("axiom 2 needs two distinct, non-antipodal points") from exc
    pm = midpoint(p1, p2, tol)
    return _solution_set(2, [np.cross(pm, a12)], tol)


def axiom3(a1, a2, tol=None):
    """Fold circle a1 onto a2: the two bisectors of the angle between them."""
    tol = _tol(tol)
    a1, a2 = as_pole(a1, tol), as_pole(a2, tol)
    d = float(a1 @ a2)
    if abs(d) >= 1.0 - tol.align:
        raise DegenerateInputError("axiom 3 needs two distinct great circles")
    inner = (a1 + a2) / (np.sqrt(2.0) * np.sqrt(1.0 + d))
    outer = (a1 - a2) / (np.sqrt(2.0) * np.sqrt(1.0 - d))
    return _solution_set(3, [inner, outer], tol)


def axiom4(p1, a1, tol=None):
    """Fold through p1 perpendicular to a1."""
    tol = _tol(tol)
    p1, a1 = unit_point(p1, tol), as_pole(a1, tol)
    c = np.cross(p1, a1)
    if np.linalg.norm(c) < tol.align:
        raise DegenerateInputError("p1 is a pole of a1; every meridian is perpendicular")
    return _solution_set(4, [c], tol)


# -- numerical axioms -------------------------------------------------------


def _bisector_pole(p, p_img, through, tol):
    """Pole of the fold taking p to p_img whose circle also contains ``through``.

    Uses ``pm x through`` where possible; falls back to ``p - p_img`` when the
    midpoint and ``through`` are (anti)parallel.
    """
    if float(p @ p_img) <= -1.0 + tol.align:
        return p.copy()
    pm = midpoint(p, p_img, tol)
    c = np.cross(pm, through)
    if np.linalg.norm(c) > 1e-6:
        return c
    d = p - p_img
    if np.linalg.norm(d) > 1e-6:
        return d
    return c


def axiom5(p1, p2, a1, tol=None):
    """Fold through p2 that places p1 onto a1.

    The image of p1 must stay at the same distance from p2, so it is found
    where the circle about p2 through p1 meets a1.
    """
    tol = _tol(tol)
    p1, p2, a1 = unit_point(p1, tol), unit_point(p2, tol), as_pole(a1, tol)
    if abs(float(p1 @ p2)) >= 1.0 - tol.align:
        raise DegenerateInputError("axiom 5 needs p1 != +-p2")
    images = great_small_intersections(a1, SmallCircle(p2, p1), tol)
    poles = [_bisector_pole(p1, q, p2, tol) for q in images]
    return _solution_set(5, poles, tol)


def _axis_point(a1, a2, tol):
    try:
        q, _ = great_great_intersections(a1, a2, tol)
    except CoincidentCirclesError as exc:
        raise DegenerateInputError("lines coincide") from exc
    return q


def axiom7_parameters(p1, a1, a2, tol=None):
    """Parameters t with p1' = rot(q, a1, t) reachable by a fold perpendicular to a2.

    A fold perpendicular to a2 passes through a2's pole, so it preserves the
    height ``a2 . x``; the condition is ``a2 . (p1 - p1'(t)) = 0``.
    """
    tol = _tol(tol)
    p1, a1, a2 = unit_point(p1, tol), as_pole(a1, tol), as_pole(a2, tol)
    q = _axis_point(a1, a2, tol)
    h = float(a2 @ p1)
    grid = h - _rot_many(q, a1, _grid(720)) @ a2
    ts = _circle_roots(lambda t: h - float(a2 @ _rot(q, a1, t)), tol, 720, grid)
    return q, ts


def axiom7(p1, a1, a2, tol=None, all_solutions=False):
    """Fold perpendicular to a2 that places p1 onto a1.

    On the sphere the admissible images of p1 lie where the circle of
    constant height above a2 through p1 meets a1, which can happen twice.
    By default only the fold whose image point is nearest to p1 is returned;
    in a small neighbourhood this is the one matching the planar
    construction. ``all_solutions=True`` returns every fold.
    """
    tol = _tol(tol)
    p1, a1, a2 = unit_point(p1, tol), as_pole(a1, tol), as_pole(a2, tol)
    q, ts = axiom7_parameters(p1, a1, a2, tol)
    images = [_rot(q, a1, t) for t in ts]
    images.sort(key=lambda x: -float(x @ p1))
    if not all_solutions:
        images = images[:1]
    poles = [_bisector_pole(p1, x, a2, tol) for x in images]
    return _solution_set(7, poles, tol)


# axiom 6 --------------------------------------------------------------------

GRID = 64
NEWTON_ITERS = 40
_FD_STEP = 1e-7
CONTINUUM_LIMIT = 32


def _axiom6_coefficients(p1, p2, a1, a2, q):
    """Precompute the axiom 6 system as trigonometric polynomials in (t1, t2).

    With p1' = cos t1 q + sin t1 b1 (b1 = a1 x q) and likewise for p2', the
    midpoints are ``w1 . (p1, q, b1) / |..|`` and ``w2 . (p2, q, b2) / |..|``
    with weights w = (1, cos t, sin t). Both equations are then bilinear
    forms in w1, w2 whose coefficient tensors are scalar triple products.
    """
    b1 = np.cross(a1, q)
    b2 = np.cross(a2, q)
    e1 = np.array([p1, q, b1])
    e2 = np.array([p2, q, b2])
    cross = np.cross(e1[:, None, :], e2[None, :, :])  # (3, 3, 3)
    # p_i x p_i' = cos t (p_i x q) + sin t (p_i x b_i)
    g1 = np.array([np.cross(p1, q), np.cross(p1, b1)])
    g2 = np.array([np.cross(p2, q), np.cross(p2, b2)])
    return {
        "T1": np.einsum("kx,ijx->kij", g1, cross),
        "T2": np.einsum("kx,ijx->kij", g2, cross),
        "d1": np.array([p1 @ q, p1 @ b1]),
        "d2": np.array([p2 @ q, p2 @ b2]),
        "b1": b1,
        "b2": b2,
    }


def _axiom6_residual(co, t1, t2):
    c1, s1, c2, s2 = np.cos(t1), np.sin(t1), np.cos(t2), np.sin(t2)
    one = np.ones_like(t1)
    w1 = np.stack([one, c1, s1])
    w2 = np.stack([one, c2, s2])
    n1 = np.sqrt(np.maximum(2.0 + 2.0 * (c1 * co["d1"][0] + s1 * co["d1"][1]), 1e-300))
    n2 = np.sqrt(np.maximum(2.0 + 2.0 * (c2 * co["d2"][0] + s2 * co["d2"][1]), 1e-300))
    b1 = np.einsum("kij,in,jn->kn", co["T1"], w1, w2)
    b2 = np.einsum("kij,in,jn->kn", co["T2"], w1, w2)
    scale = n1 * n2
    f1 = (c1 * b1[0] + s1 * b1[1]) / scale
    f2 = (c2 * b2[0] + s2 * b2[1]) / scale
    return np.stack([f1, f2], axis=1)


def _newton_multistart(p1, p2, a1, a2, q, grid, tol):
    co = _axiom6_coefficients(p1, p2, a1, a2, q)
    g = (np.arange(grid) + 0.5) * (2.0 * np.pi / grid)
    t1, t2 = (x.ravel() for x in np.meshgrid(g, g, indexing="ij"))
    found1, found2 = [], []
    for it in range(NEWTON_ITERS):
        f = _axiom6_residual(co, t1, t2)
        res = np.max(np.abs(f), axis=1)
        conv = res < 1e-14
        # starts that are not in a root's basin after a few steps are dropped
        keep = ~conv & (res < 1e-3) if it >= 10 else ~conv
        found1.append(t1[conv])
        found2.append(t2[conv])
        t1, t2, f = t1[keep], t2[keep], f[keep]
        if len(t1) == 0:
            break
        fa = _axiom6_residual(co, t1 + _FD_STEP, t2)
        fb = _axiom6_residual(co, t1, t2 + _FD_STEP)
        j11 = (fa[:, 0] - f[:, 0]) / _FD_STEP
        j21 = (fa[:, 1] - f[:, 1]) / _FD_STEP
        j12 = (fb[:, 0] - f[:, 0]) / _FD_STEP
        j22 = (fb[:, 1] - f[:, 1]) / _FD_STEP
        det = j11 * j22 - j12 * j21
        ok = np.abs(det) > 1e-14
        safe = np.where(ok, det, 1.0)
        d1 = np.where(ok, (j22 * f[:, 0] - j12 * f[:, 1]) / safe, 0.0)
        d2 = np.where(ok, (j11 * f[:, 1] - j21 * f[:, 0]) / safe, 0.0)
        # damp long steps; the system is periodic so large jumps just scatter
        step = np.maximum(np.hypot(d1, d2) / 0.5, 1.0)
        t1 = t1 - d1 / step
        t2 = t2 - d2 / step
    f = _axiom6_residual(co, t1, t2)
    done = np.max(np.abs(f), axis=1) < max(tol.root, 1e-12)
    t1 = np.concatenate(found1 + [t1[done]])
    t2 = np.concatenate(found2 + [t2[done]])
    img1 = np.cos(t1)[:, None] * q + np.sin(t1)[:, None] * co["b1"]
    img2 = np.cos(t2)[:, None] * q + np.sin(t2)[:, None] * co["b2"]
    return img1, img2


def axiom6(p1, p2, a1, a2, tol=None, grid=GRID):
    """Fold placing p1 onto a1 and p2 onto a2 simultaneously.

    Multistart Newton over a ``grid x grid`` lattice of the image parameters
    (t1, t2); converged roots are verified by reflection and deduplicated.
    """
    tol = _tol(tol)
    p1, p2 = unit_point(p1, tol), unit_point(p2, tol)
    a1, a2 = as_pole(a1, tol), as_pole(a2, tol)
    q = _axis_point(a1, a2, tol)
    img1, img2 = _newton_multistart(p1, p2, a1, a2, q, grid, tol)
    poles = _axiom6_poles(p1, p2, img1, img2)
    if len(poles):
        r1 = np.abs((p1 - 2.0 * (poles @ p1)[:, None] * poles) @ a1)
        r2 = np.abs((p2 - 2.0 * (poles @ p2)[:, None] * poles) @ a2)
        poles = poles[(r1 < tol.align) & (r2 < tol.align)]
    # many starts land on the same root; thin out before the exact dedup
    signs = np.where(poles[:, :1] < 0, -1.0, 1.0) if len(poles) else poles
    _, first = np.unique(np.round(poles * signs, 6), axis=0, return_index=True)
    if len(first) > CONTINUUM_LIMIT:
        # isolated solutions never come close to this many; the inputs admit a whole family of folds
        raise DegenerateInputError("axiom 6 inputs admit a continuum of folds")
    return _solution_set(6, poles[np.sort(first)], tol)


def _axiom6_poles(p1, p2, x1, x2):
    # the fold normal is parallel to p_i - p_i'; rows where both vanish are dropped
    u, v = p1 - x1, p2 - x2
    nu = np.linalg.norm(u, axis=1)
    nv = np.linalg.norm(v, axis=1)
    use_u = nu >= nv
    n = np.where(use_u[:, None], u, v)
    nn = np.where(use_u, nu, nv)
    both_fixed = nn <= 1e-6
    c = np.cross(p1, p2)
    if both_fixed.any() and np.linalg.norm(c) > 1e-6:
        # both points already on their lines: fold through both of them
        n[both_fixed] = c
        nn[both_fixed] = np.linalg.norm(c)
    ok = nn > 1e-6
    return n[ok] / nn[ok][:, None]


# -- verification -------------------------------------------------------------


def residuals(axiom_id, inputs, solution, tol=None):
    """Alignment residuals of ``solution`` for the given axiom inputs.

    ``inputs`` is the tuple of positional arguments passed to the solver.
    All returned values are zero for an exact solution.
    """
    n = as_pole(solution, tol)
    ref = lambda x: reflect(x, n)  # noqa: E731
    if axiom_id == 1:
        p1, p2 = inputs
        return {"p1_on_fold": abs(n @ p1), "p2_on_fold": abs(n @ p2)}
    if axiom_id == 2:
        p1, p2 = inputs
        return {"p1_onto_p2": float(np.max(np.abs(ref(p1) - np.asarray(p2))))}
    if axiom_id == 3:
        a1, a2 = (as_pole(x) for x in inputs)
        r = ref(a1)
        return {"a1_onto_a2": float(min(np.max(np.abs(r - a2)), np.max(np.abs(r + a2))))}
    if axiom_id == 4:
        p1, a1 = inputs
        return {
            "p1_on_fold": abs(n @ p1),
            "perpendicular": abs(crossing_angle(n, a1) - np.pi / 2),
        }
    if axiom_id == 5:
        p1, p2, a1 = inputs
        return {"p1_onto_a1": abs(as_pole(a1) @ ref(p1)), "p2_on_fold": abs(n @ p2)}
    if axiom_id == 6:
        p1, p2, a1, a2 = inputs
        return {"p1_onto_a1": abs(as_pole(a1) @ ref(p1)), "p2_onto_a2": abs(as_pole(a2) @ ref(p2))}
    if axiom_id == 7:
        p1, a1, a2 = inputs
        a2 = as_pole(a2)
        return {
            "p1_onto_a1": abs(as_pole(a1) @ ref(p1)),
            "perpendicular": abs(crossing_angle(n, a2) - np.pi / 2) if abs(n @ a2) < 1 - 1e-9 else 0.0,
        }
    raise ValidationError(f"unknown axiom {axiom_id}")


def solve(axiom_id, *inputs, tol=None):
    solvers = {1: axiom1, 2: axiom2, 3: axiom3, 4: axiom4, 5: axiom5, 6: axiom6, 7: axiom7}
    if axiom_id not in solvers:
        raise ValidationError(f"unknown axiom {axiom_id}")
    return solvers[axiom_id](*inputs, tol=tol)


__all__ = [
    "AlignmentKind",
    "AlignmentSpec",
    "FoldSolutionSet",
    "MAX_SOLUTIONS",
    "axiom1",
    "axiom2",
    "axiom3",
    "axiom4",
    "axiom5",
    "axiom6",
    "axiom7",
    "axiom7_parameters",
    "canonical_pole",
    "check_alignment",
    "crossing_angle",
    "residuals",
    "solve",
]

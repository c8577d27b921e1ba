"""Folding spherical faces into space across equidistant (small-circle) curves.

A fold curve joins two non-antipodal points P and Q. Its plane contains the
chord PQ and is tilted by ``theta`` away from the great circle through P and
Q; reflecting in that plane carries the unit sphere onto a congruent
"mirror" sphere centred at ``2 h a_theta`` (``h = a_theta . p``). With
``theta = 0`` the plane passes through the origin and the fold is the
ordinary flat fold on the sphere.

Sign convention: the folded region is the side of PQ where ``(p x q) . x > 0``.
Positive theta then folds it to the inside of the sphere, negative theta to
the outside.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import AntipodalError, CurvePlacementError, FoldRangeError, ValidationError
from .sphere_core import _rot, _rot_many, _tol, as_vector, midpoint, normalize, pole_through, unit_point

CURVE_SAMPLES = 65


class FoldDirection(Enum):
    INSIDE = 1
    FLAT = 0
    OUTSIDE = -1

    @classmethod
    def of(cls, theta):
        return cls(int(np.sign(theta)))


@dataclass(frozen=True, eq=False)
class FoldCurve3D:
    p: np.ndarray
    q: np.ndarray
    theta: float
    a_pq: np.ndarray = field(repr=False)
    a_theta: np.ndarray = field(repr=False)
    psi: float = 0.0

    @property
    def height(self):
        """Offset ``a_theta . p`` of the fold plane from the origin."""
        return float(self.a_theta @ self.p)

    @property
    def o2(self):
        """Centre of the small circle carrying the curve."""
        return self.height * self.a_theta

    @property
    def o1(self):
        """Centre of the mirror sphere."""
        return 2.0 * self.height * self.a_theta

    @property
    def apex(self):
        return self.point(self.psi / 2.0)

    @property
    def inside(self):
        return self.theta > 0

    @property
    def direction(self):
        return FoldDirection.of(self.theta)

    def point(self, t):
        return _rot(self.p, self.a_theta, t)

    def sample(self, n=CURVE_SAMPLES):
        return np.array([self.point(t) for t in np.linspace(0.0, self.psi, n)])


def make_fold_curve(p, q, theta, tol=None):
    """Small-arc fold curve from p to q with tilt ``theta``."""
    tol = _tol(tol)
    p, q = unit_point(p, tol), unit_point(q, tol)
    try:
        a_pq = pole_through(p, q, tol)
    except AntipodalError as exc:
        raise AntipodalError("fold curve endpoints must be distinct and non-antipodal") from exc
    midpoint(p, q, tol)  # rejects antipodal endpoints
    # normalizing p + q directly avoids the cancellation in sqrt(1 + p.q) for nearly antipodal ends
    pm = normalize(p + q)
    a_theta = _rot(a_pq, np.cross(a_pq, pm), theta)
    h = float(a_theta @ p)
    u = p - h * a_theta
    v = q - (a_theta @ q) * a_theta
    psi = float(np.arccos(np.clip((u @ v) / (1.0 - h * h), -1.0, 1.0)))
    return FoldCurve3D(p, q, float(theta), a_pq, a_theta, psi)


def fold_point_reflect_rotate(r, curve):
    """Image of r: flat reflection across PQ, then rotation by 2 theta about the chord PQ."""
    r = as_vector(r)
    p, q = curve.p, curve.q
    flat = r - 2.0 * float(curve.a_pq @ r) * curve.a_pq
    axis = (q - p) / np.linalg.norm(q - p)
    return _rot(flat - p, axis, 2.0 * curve.theta) + p


def fold_point_reflect(r, curve):
    """Image of r: reflection in the (affine) plane of the fold curve."""
    r = as_vector(r)
    a, h = curve.a_theta, curve.height
    shifted = r - h * a
    return shifted - 2.0 * float(a @ shifted) * a + h * a


def dihedral_angle(curve):
    """Angle between the tangent planes of the two spheres at the apex.

    ``2 arccos(sqrt((1 + p.q)/2) sin theta)``; pi for a flat fold, below pi
    for inside folds and above pi for outside folds.
    """
    c = np.sqrt((1.0 + float(curve.p @ curve.q)) / 2.0)
    return float(2.0 * np.arccos(np.clip(c * np.sin(curve.theta), -1.0, 1.0)))


# -- faces ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SphericalFace:
    """Closed boundary on a unit sphere, counterclockwise seen from outside.

    ``edge_poles[i]`` is None for a geodesic edge from vertex i to i+1, or
    the pole of a small circle; the edge is then ``rot(v_i, pole, t)`` for t
    from 0 to the angle that reaches v_{i+1}. ``center`` is the sphere's
    centre (the origin unless the face was moved by a 3D fold).
    """

    vertices: np.ndarray
    edge_poles: tuple = None
    center: np.ndarray = None

    def __post_init__(self):
        c = np.zeros(3) if self.center is None else as_vector(self.center)
        verts = np.array(self.vertices, dtype=float).reshape(-1, 3)
        if len(verts) < 2:
            raise ValidationError("a face needs at least two vertices")
        for v in verts:
            if abs(np.linalg.norm(v - c) - 1.0) > 1e-8:
                raise ValidationError("face vertex is not on the face's sphere")
        poles = self.edge_poles or (None,) * len(verts)
        if len(poles) != len(verts):
            raise ValidationError("one edge pole entry per vertex required")
        poles = tuple(None if a is None else normalize(a) for a in poles)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edge_poles", poles)
        object.__setattr__(self, "center", c)

    def __len__(self):
        return len(self.vertices)

    def index_of(self, x, tol=1e-9):
        d = np.linalg.norm(self.vertices - as_vector(x), axis=1)
        i = int(np.argmin(d))
        if d[i] > tol:
            raise ValidationError("point is not a vertex of the face")
        return i

    def edge(self, i):
        """(pole, sweep) of edge i in sphere-centred coordinates."""
        n = len(self.vertices)
        a = self.vertices[i] - self.center
        b = self.vertices[(i + 1) % n] - self.center
        pole = self.edge_poles[i]
        if pole is None:
            pole = pole_through(a, b)
            return pole, float(np.arccos(np.clip(a @ b, -1.0, 1.0)))
        u = a - (pole @ a) * pole
        w = b - (pole @ b) * pole
        sweep = np.arctan2(np.cross(u, w) @ pole, u @ w) % (2 * np.pi)
        if sweep < 1e-12:
            sweep = 2 * np.pi
        return pole, float(sweep)

    def edge_points(self, i, n):
        pole, sweep = self.edge(i)
        a = self.vertices[i] - self.center
        return _rot_many(a, pole, np.linspace(0.0, sweep, n)) + self.center

    def boundary(self, per_edge=33):
        """Closed polyline sampling of the boundary (last point omitted)."""
        pts = [self.edge_points(i, per_edge)[:-1] for i in range(len(self.vertices))]
        return np.concatenate(pts)

    def interior_angle(self, i):
        """Angle of the face at vertex i, between the tangents of its two edges."""
        n = len(self.vertices)
        v = self.vertices[i] - self.center
        pole_out, _ = self.edge(i)
        pole_in, _ = self.edge((i - 1) % n)
        d_out = np.cross(pole_out, v)
        d_back = -np.cross(pole_in, v)
        d_out = d_out - (d_out @ v) * v
        d_back = d_back - (d_back @ v) * v
        ang = np.arctan2(np.cross(d_out, d_back) @ v, d_out @ d_back)
        return float(ang % (2 * np.pi))

    def transformed(self, fn):
        """Image under an isometry ``fn`` of space.

        Orientation-reversing maps also reverse the vertex order so that the
        image is again counterclockwise seen from outside its sphere.
        """
        c = fn(self.center)
        lin = lambda a: fn(self.center + a) - c  # noqa: E731
        det = np.linalg.det(np.array([lin(e) for e in np.eye(3)]))
        verts = np.array([fn(v) for v in self.vertices])
        if det > 0:
            poles = tuple(None if a is None else lin(a) for a in self.edge_poles)
            return SphericalFace(verts, poles, c)
        n = len(verts)
        poles = tuple(
            None if self.edge_poles[(n - 2 - k) % n] is None else lin(self.edge_poles[(n - 2 - k) % n])
            for k in range(n)
        )
        return SphericalFace(verts[::-1], poles, c)

    def contains(self, x, tol=1e-9):
        return point_in_face(self, x, tol)

    def area(self):
        """Area from Gauss-Bonnet: 2 pi - sum of exterior angles - edge geodesic curvature."""
        n = len(self.vertices)
        total = 0.0
        for i in range(n):
            total += np.pi - self.interior_angle(i)
            pole = self.edge_poles[i]
            if pole is not None:
                _, sweep = self.edge(i)
                h = float(pole @ (self.vertices[i] - self.center))
                # geodesic curvature h/sqrt(1-h^2) times arc length sweep*sqrt(1-h^2)
                total += h * sweep
        return 2 * np.pi - total


def point_in_face(face, x, tol=1e-9, per_edge=65):
    """Point-in-polygon on the sphere by winding angle about ``x``.

    Boundary points (within ``tol`` of the sampled boundary) count as inside.
    Valid for faces that do not contain both ``x`` and its antipode.
    """
    c = face.center
    x = as_vector(x) - c
    x = x / np.linalg.norm(x)
    pts = face.boundary(per_edge) - c
    if np.min(np.linalg.norm(pts - x, axis=1)) < tol:
        return True
    # on-boundary test against the exact edges
    for i in range(len(face.vertices)):
        pole, sweep = face.edge(i)
        a = face.vertices[i] - c
        h = float(pole @ a)
        if abs(float(pole @ x) - h) < tol:
            u = a - h * pole
            w = x - (pole @ x) * pole
            ang = np.arctan2(np.cross(u, w) @ pole, u @ w) % (2 * np.pi)
            if ang <= sweep + tol:
                return True
    e1 = normalize(np.cross(x, [1.0, 0.0, 0.0]) if abs(x[0]) < 0.9 else np.cross(x, [0.0, 1.0, 0.0]))
    e2 = np.cross(x, e1)
    d = pts - np.outer(pts @ x, x)
    ang = np.arctan2(d @ e2, d @ e1)
    turn = np.sum(_wrap(np.diff(np.append(ang, ang[0]))))
    # ccw faces wind +2pi around interior points and -2pi around antipodes of interior points
    return bool(turn > np.pi)


def _wrap(a):
    return (a + np.pi) % (2 * np.pi) - np.pi


def theta_max(face, p, q):
    """Bound on |theta| for a fold curve from p to q drawn on ``face``."""
    i, j = face.index_of(p), face.index_of(q)
    return min(face.interior_angle(i), face.interior_angle(j))


def fold_curve_on_edge(face, i, theta, tol=None):
    """Fold curve along edge i of ``face`` oriented so that the face is the folded side."""
    n = len(face.vertices)
    a, b = face.vertices[i], face.vertices[(i + 1) % n]
    # ccw boundary: the face lies left of a->b, i.e. where (a x b).x > 0
    return make_fold_curve(a, b, theta, tol)


def folded_region(face, curve, tol=None):
    """The face with its edge PQ replaced by the fold curve.

    For inside folds this adds the lens between the geodesic PQ and the
    curve; for outside folds it removes it.
    """
    tol = _tol(tol)
    n = len(face.vertices)
    i, j = face.index_of(curve.p), face.index_of(curve.q)
    if (i + 1) % n != j and (j + 1) % n != i:
        raise ValidationError("p and q must be adjacent face vertices")
    if float(curve.a_pq @ face.vertices.mean(axis=0)) < 0:
        raise ValidationError("face lies on the wrong side of PQ for this curve")
    if (i + 1) % n != j:
        raise ValidationError("face orientation does not match the fold curve")
    poles = list(face.edge_poles)
    poles[i] = curve.a_theta if curve.theta != 0 else None
    return SphericalFace(face.vertices, tuple(poles), face.center)


@dataclass(frozen=True, eq=False)
class FoldedFace:
    original: SphericalFace
    region: SphericalFace
    image: SphericalFace
    curve: FoldCurve3D


def fold_face(face, curve, host=None, tol=None, check_placement=True):
    """Fold ``face`` across ``curve`` (built on one of its edges) into space.

    ``host`` is the face the curve is drawn on: the face itself for outside
    folds (theta < 0); for inside folds, the neighbouring face across PQ,
    which must be given for the placement check to run.
    """
    tol = _tol(tol)
    if host is None and curve.theta <= 0:
        host = face
    bound = theta_max(host if host is not None else face, curve.p, curve.q)
    if abs(curve.theta) > bound + tol.align:
        raise FoldRangeError(f"|theta| = {abs(curve.theta):.6g} exceeds theta_max = {bound:.6g}")
    if check_placement and host is not None and curve.theta != 0:
        for x in curve.sample(CURVE_SAMPLES)[1:-1]:
            if not point_in_face(host, x, tol=1e-9):
                raise CurvePlacementError("fold curve leaves the face that hosts it")
    region = folded_region(face, curve, tol)
    image = region.transformed(lambda r: fold_point_reflect_rotate(r, curve))
    return FoldedFace(face, region, image, curve)


__all__ = [
    "FoldCurve3D",
    "FoldDirection",
    "FoldedFace",
    "SphericalFace",
    "dihedral_angle",
    "fold_curve_on_edge",
    "fold_face",
    "fold_point_reflect",
    "fold_point_reflect_rotate",
    "folded_region",
    "make_fold_curve",
    "point_in_face",
    "theta_max",
]

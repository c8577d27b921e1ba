"""Spherical origami birds folded from a digon (lune) sheet.

The sheet is the lune between the antipodal vertices N and S with inner
angle beta. Its boundary is treated as a quadrilateral N, E1, S, E2 whose
"corners" E1 and E2 are the midpoints of the two sides, so the inscribed
circle is centred at the lune's centre C with radius beta/2 and touches both
sides at E1 and E2.

The crease pattern is the bird base transplanted to this quadrilateral: the
diagonals C-K for every corner K, and inside each triangle (K_i, K_i+1, C)
its incentre P_i, the three bisectors K_i-P_i, K_i+1-P_i, C-P_i and the
perpendicular P_i-M_i onto the side. Every point is produced by the axiom
solvers (axiom 1 for the diagonals, axiom 3 for the bisectors, axiom 4 for
the perpendiculars). The flat bird folds every crease; corners become the
four flap tips, which all lie at their distance from C along a single
geodesic ray through C's image.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace

import numpy as np

from . import axioms
from .errors import FoldRangeError, SphericalOrigamiError, ValidationError
from .flat_fold import VertexPattern, kawasaki_check, tangent_basis
from .fold3d import (
    SphericalFace,
    dihedral_angle,
    fold_curve_on_edge,
    fold_face,
    fold_point_reflect_rotate,
    point_in_face,
)
from .sphere_core import (
    DEFAULT_TOL,
    GeodesicArc,
    GreatCircle,
    SmallCircle,
    _rot,
    _tol,
    great_great_intersections,
    normalize,
    pole_through,
    unit_point,
)

CORNER_LABELS = ("tail", "wing_inner", "back", "wing_outer")
WING_INNER, WING_OUTER = 1, 3  # corner indices of the two wings
STAGES = ("diagonal", "centre-bisector", "corner-bisector", "perpendicular")


@dataclass(frozen=True, eq=False)
class DigonSheet:
    """Lune with vertices ``vertex_axis = (N, -N)`` and the given inner angle."""

    inner_angle: float
    vertex_axis: tuple = None

    def __post_init__(self):
        beta = float(self.inner_angle)
        if not (0.0 < beta <= np.pi + DEFAULT_TOL.align):
            raise ValidationError(f"inner angle must lie in (0, pi], got {beta!r}")
        if self.vertex_axis is None:
            n = np.array([0.0, 0.0, 1.0])
        else:
            n = unit_point(self.vertex_axis[0])
            if len(self.vertex_axis) > 1 and np.linalg.norm(np.asarray(self.vertex_axis[1]) + n) > 1e-9:
                raise ValidationError("digon vertices must be antipodal")
        object.__setattr__(self, "inner_angle", min(beta, np.pi))
        object.__setattr__(self, "vertex_axis", (n, -n))

    @property
    def center(self):
        return tangent_basis(self.vertex_axis[0])[0]

    @property
    def corners(self):
        """N, E1, S, E2 in counterclockwise order seen from outside."""
        n, s = self.vertex_axis
        c = self.center
        half = self.inner_angle / 2.0
        return np.array([n, _rot(c, n, -half), s, _rot(c, n, half)])

    @property
    def mirror(self):
        """Pole of the plane through N, S and C that swaps the two sides."""
        return normalize(np.cross(self.vertex_axis[0], self.center))

    def face(self):
        n, e1, s, e2 = self.corners
        return SphericalFace([n, s], (np.cross(n, e1) / np.linalg.norm(np.cross(n, e1)),
                                      np.cross(s, e2) / np.linalg.norm(np.cross(s, e2))))

    def area(self):
        return 2.0 * self.inner_angle


@dataclass(frozen=True, eq=False)
class Crease:
    arc: GeodesicArc
    step: int
    mirror: GreatCircle
    ends: tuple  # names of the two end points
    stage: str = ""


@dataclass(frozen=True, eq=False)
class Extension:
    """Extra triangle attached to the inner wing across its hinge crease.

    ``face`` is in sheet coordinates on the far side of the hinge; it is
    carried by the inner wing's fold map.
    """

    face: SphericalFace
    wing_theta: float
    angle: float  # base angle at both hinge ends


@dataclass(frozen=True, eq=False)
class FoldoutDiagram:
    sheet: DigonSheet
    points: dict
    creases: tuple
    faces: tuple  # tuples of point names, counterclockwise
    incircle: SmallCircle
    root: int = 0
    extension: Extension = None

    def point(self, name):
        return self.points[name]

    def crease_between(self, a, b):
        key = frozenset((a, b))
        for k, c in enumerate(self.creases):
            if frozenset(c.ends) == key:
                return k
        return None

    def face_geometry(self, k):
        return SphericalFace([self.points[n] for n in self.faces[k]])

    def face_label(self, k):
        for i, lab in enumerate(CORNER_LABELS):
            if f"K{i}" in self.faces[k]:
                return lab
        return "body"

    def interior_vertices(self):
        return ["C"] + [f"P{i}" for i in range(4)]

    def vertex_pattern(self, name):
        ends = [self.points[c.ends[1] if c.ends[0] == name else c.ends[0]] for c in self.creases if name in c.ends]
        return VertexPattern(self.points[name], np.array(ends))

    def wing_face(self, corner):
        """Index of the wing face (C, K, P) hinged on crease C-P."""
        if corner == WING_INNER:
            names = ("K1", "C", "P0")
        else:
            names = ("C", "K3", "P3")
        for k, f in enumerate(self.faces):
            if set(f) == set(names):
                return k
        raise SphericalOrigamiError("wing face missing from diagram")

    def wing_hinge(self, corner):
        return ("C", "P0") if corner == WING_INNER else ("C", "P3")


def _interior_bisector(vertex, toward1, toward2, tol):
    """Great circle bisecting the angle at ``vertex`` between two directions."""
    a1 = pole_through(vertex, toward1, tol)
    a2 = pole_through(vertex, toward2, tol)
    d1 = toward1 - (toward1 @ vertex) * vertex
    d2 = toward2 - (toward2 @ vertex) * vertex
    inside = d1 / np.linalg.norm(d1) + d2 / np.linalg.norm(d2)
    sols = axioms.axiom3(a1, a2, tol)
    return min(sols, key=lambda c: abs(float(c.pole @ inside)))


def _nearest(points, target):
    return min(points, key=lambda x: float(np.linalg.norm(x - target)))


def digon_foldout(sheet, tol=None):
    """Bird-base crease pattern on the digon, built with the axiom solvers."""
    tol = _tol(tol)
    if not isinstance(sheet, DigonSheet):
        sheet = DigonSheet(sheet)
    c = sheet.center
    ks = sheet.corners
    pts = {"C": c}
    for i, k in enumerate(ks):
        pts[f"K{i}"] = k
    creases = []

    def add(a, b, stage, step):
        arc = GeodesicArc(pts[a], pts[b])
        # every crease is the axiom 1 fold through its two end points
        creases.append(Crease(arc, step, axioms.axiom1(pts[a], pts[b], tol)[0], (a, b), stage))

    for i in range(4):
        add("C", f"K{i}", STAGES[0], 0)
    for i in range(4):
        k0, k1 = ks[i], ks[(i + 1) % 4]
        bis_c = _interior_bisector(c, k0, k1, tol)
        bis_k = _interior_bisector(k0, k1, c, tol)
        p = _nearest(great_great_intersections(bis_c, bis_k, tol), (c + k0 + k1) / 3.0)
        side = GreatCircle(pole_through(k0, k1, tol))
        perp = axioms.axiom4(p, side, tol)[0]
        m = _nearest(great_great_intersections(perp, side, tol), p)
        pts[f"P{i}"] = p
        pts[f"M{i}"] = m
    for i in range(4):
        add("C", f"P{i}", STAGES[1], 1)
    for i in range(4):
        add(f"K{i}", f"P{i}", STAGES[2], 2)
        add(f"K{(i + 1) % 4}", f"P{i}", STAGES[2], 2)
    for i in range(4):
        add(f"P{i}", f"M{i}", STAGES[3], 3)
    faces = []
    for i in range(4):
        k0, k1 = f"K{i}", f"K{(i + 1) % 4}"
        p, m = f"P{i}", f"M{i}"
        faces += [("C", k0, p), (k0, m, p), (m, k1, p), (k1, "C", p)]
    incircle = SmallCircle(c, pts["K1"])
    return FoldoutDiagram(sheet, pts, tuple(creases), tuple(faces), incircle)


def _reflection_matrix(pole):
    return np.eye(3) - 2.0 * np.outer(pole, pole)


@dataclass(frozen=True, eq=False)
class FlatBird:
    diagram: FoldoutDiagram
    maps: tuple  # 3x3 orthogonal matrix per face
    paths: tuple  # crease indices crossed from the root face
    fold_order: tuple  # crease indices in the order they were first folded

    def image(self, k):
        face = self.diagram.face_geometry(k)
        m = self.maps[k]
        return face.transformed(lambda x: m @ x)

    def images(self):
        return [self.image(k) for k in range(len(self.maps))]

    def map_point(self, name):
        """Image of a sheet point, via any face that contains it."""
        for k, f in enumerate(self.diagram.faces):
            if name in f:
                return self.maps[k] @ self.diagram.points[name]
        raise KeyError(name)

    @property
    def tips(self):
        return {lab: self.map_point(f"K{i}") for i, lab in enumerate(CORNER_LABELS)}

    def labels(self):
        return [self.diagram.face_label(k) for k in range(len(self.maps))]


def _face_edges(face):
    n = len(face)
    return [frozenset((face[i], face[(i + 1) % n])) for i in range(n)]


def fold_flat_bird(diagram, tol=None):
    """Fold every crease flat by composing reflections outward from the root face.

    Each face's map is its parent's map times the reflection in the crease
    they share. Creases that close a loop are checked for consistency, which
    is where the local flat-foldability of every interior vertex is used.
    """
    tol = _tol(tol)
    crease_of = {frozenset(c.ends): k for k, c in enumerate(diagram.creases)}
    mirrors = [_reflection_matrix(c.mirror.pole) for c in diagram.creases]
    neighbours = {}
    for k, f in enumerate(diagram.faces):
        for e in _face_edges(f):
            if e in crease_of:
                neighbours.setdefault(e, []).append(k)
    n = len(diagram.faces)
    maps = [None] * n
    paths = [None] * n
    maps[diagram.root] = np.eye(3)
    paths[diagram.root] = ()
    order = []
    queue = deque([diagram.root])
    while queue:
        k = queue.popleft()
        for e in _face_edges(diagram.faces[k]):
            if e not in crease_of:
                continue
            ci = crease_of[e]
            for j in neighbours[e]:
                if j == k:
                    continue
                m = maps[k] @ mirrors[ci]
                if maps[j] is None:
                    maps[j] = m
                    paths[j] = paths[k] + (ci,)
                    if ci not in order:
                        order.append(ci)
                    queue.append(j)
                elif np.max(np.abs(maps[j] - m)) > 1e3 * tol.align:
                    raise SphericalOrigamiError("crease pattern does not fold flat consistently")
    for ci in range(len(diagram.creases)):
        if ci not in order:
            order.append(ci)
    return FlatBird(diagram, tuple(maps), tuple(paths), tuple(order))


def replay_fold(diagram, path):
    """Fold map obtained by applying the crease reflections along ``path``."""
    m = np.eye(3)
    for ci in path:
        m = m @ _reflection_matrix(diagram.creases[ci].mirror.pole)
    return m


def _hinge_triangle(p, q, away, angle):
    """Isosceles triangle on the segment p-q with base angles ``angle``, on the side of ``away``."""
    a = pole_through(p, q)
    side = 1.0 if float(a @ away) > 0 else -1.0
    # right triangle (base end, midpoint, apex): tan(height) = tan(angle) sin(half base)
    half = 0.5 * float(np.arccos(np.clip(p @ q, -1.0, 1.0)))
    height = np.arctan(np.tan(angle) * np.sin(half))
    x = np.cos(height) * normalize(p + q) + np.sin(height) * side * a
    verts = [p, q, x] if side > 0 else [q, p, x]
    return SphericalFace(verts)


def wing_theta_bound(diagram):
    """Largest wing fold parameter: the wing face's smaller angle at its hinge ends."""
    k = diagram.wing_face(WING_INNER)
    face = diagram.face_geometry(k)
    a, b = diagram.wing_hinge(WING_INNER)
    return min(face.interior_angle(diagram.faces[k].index(a)), face.interior_angle(diagram.faces[k].index(b)))


def extend_inner_wing(diagram, wing_theta, tol=None):
    """Diagram whose inner-wing face carries an extension across its hinge.

    The extension is the triangle on the hinge C-P0 with base angles
    ``wing_theta`` plus the alignment tolerance, on the far side from the
    wing. Its base angles may not exceed the wing's own angles at the hinge,
    so the extension always lies inside the wing face's mirror image across
    the hinge. At the limit its apex reaches the mirrored edge C-K1.
    """
    tol = _tol(tol)
    wing_theta = float(wing_theta)
    if not wing_theta > 0:
        raise ValidationError("wing_theta must be positive")
    bound = wing_theta_bound(diagram)
    if wing_theta > bound + tol.align:
        raise FoldRangeError(f"wing_theta {wing_theta:.6g} exceeds the hinge bound {bound:.6g}")
    angle = min(wing_theta + tol.align, bound)
    a, b = diagram.wing_hinge(WING_INNER)
    p, q = diagram.points[a], diagram.points[b]
    hinge = pole_through(p, q)
    tip = diagram.points["K1"]
    face = _hinge_triangle(p, q, tip - 2.0 * float(hinge @ tip) * hinge, angle)
    return replace(diagram, extension=Extension(face, wing_theta, angle))


@dataclass(frozen=True)
class BirdParams:
    inner_angle: float
    wing_theta: float

    def __post_init__(self):
        DigonSheet(self.inner_angle)
        if not self.wing_theta > 0:
            raise ValidationError("wing_theta must be positive")


@dataclass(frozen=True, eq=False)
class Bird3D:
    flat: FlatBird
    params: BirdParams
    faces: tuple  # (label, SphericalFace) pairs
    wings: dict  # label -> FoldedFace
    tips: dict
    wing_chords: dict
    wing_dihedrals: dict


def _edge_index(face, p, q):
    i = face.index_of(p)
    j = face.index_of(q)
    n = len(face)
    if (i + 1) % n == j:
        return i
    if (j + 1) % n == i:
        return j
    raise ValidationError("hinge is not an edge of the face")


def _remainder(ext_img, curve):
    """Part of the extension left behind when the lens beyond the hinge folds away."""
    i = _edge_index(ext_img, curve.p, curve.q)
    poles = list(ext_img.edge_poles)
    start = ext_img.vertices[i]
    poles[i] = curve.a_theta if np.linalg.norm(start - curve.p) < 1e-9 else -curve.a_theta
    return SphericalFace(ext_img.vertices, tuple(poles))


def expand_wings(flat_bird, params, tol=None):
    """Lift the two wings off the sphere: inner wing inside, outer wing outside.

    Both fold curves run between the hinge ends C and P, so they meet the
    original hinge crease at its ends. The inner curve lies in the
    extension, the outer one on the outer wing face.
    """
    tol = _tol(tol)
    d = flat_bird.diagram
    if d.extension is None:
        raise ValidationError("expand_wings needs a diagram from extend_inner_wing")
    theta = float(params.wing_theta)
    if theta > d.extension.wing_theta + tol.align:
        raise FoldRangeError("wing_theta exceeds the extension built into the diagram")
    inner_k, outer_k = d.wing_face(WING_INNER), d.wing_face(WING_OUTER)
    faces = []
    wings = {}
    chords = {}
    dihedrals = {}
    tips = dict(flat_bird.tips)
    for k, img in enumerate(flat_bird.images()):
        if k not in (inner_k, outer_k):
            faces.append((d.face_label(k), img))
    m_in = flat_bird.maps[inner_k]
    ext_img = d.extension.face.transformed(lambda x: m_in @ x)
    for corner, k, sign in ((WING_INNER, inner_k, 1.0), (WING_OUTER, outer_k, -1.0)):
        label = CORNER_LABELS[corner]
        img = flat_bird.image(k)
        a, b = d.wing_hinge(corner)
        p, q = flat_bird.maps[k] @ d.points[a], flat_bird.maps[k] @ d.points[b]
        curve = fold_curve_on_edge(img, _edge_index(img, p, q), sign * theta, tol)
        host = ext_img if sign > 0 else img
        folded = fold_face(img, curve, host=host, tol=tol)
        wings[label] = folded
        faces.append((label, folded.image))
        tip = fold_point_reflect_rotate(flat_bird.maps[k] @ d.points[f"K{corner}"], curve)
        tips[label] = tip
        # wing bottom: the hinge end nearer the tip on the sheet
        ends = [d.points[a], d.points[b]]
        near = min(range(2), key=lambda j: np.linalg.norm(ends[j] - d.points[f"K{corner}"]))
        bottom = flat_bird.maps[k] @ ends[near]
        chords[label] = float(np.linalg.norm(tip - bottom))
        dihedrals[label] = dihedral_angle(curve)
        if sign > 0:
            faces.append(("wing_inner_extension", _remainder(ext_img, curve)))
    return Bird3D(flat_bird, params, tuple(faces), wings, tips, chords, dihedrals)


def build_bird(params, tol=None):
    """Foldout, extension, flat fold and wing expansion in one call."""
    diagram = digon_foldout(DigonSheet(params.inner_angle), tol)
    diagram = extend_inner_wing(diagram, params.wing_theta, tol)
    return expand_wings(fold_flat_bird(diagram, tol), params, tol)


def foldout_kawasaki(diagram, tol=None):
    """kawasaki_check result for every interior vertex, keyed by point name."""
    return {v: kawasaki_check(diagram.vertex_pattern(v), tol) for v in diagram.interior_vertices()}


def extension_overlaps(flat_bird, labels=("tail", "back"), samples=8):
    """Sampled interior points of the extension image that land inside the given flaps."""
    d = flat_bird.diagram
    m = flat_bird.maps[d.wing_face(WING_INNER)]
    ext = d.extension.face.transformed(lambda x: m @ x)
    v = ext.vertices
    hits = []
    targets = [flat_bird.image(k) for k in range(len(d.faces)) if d.face_label(k) in labels]
    for i in range(1, samples):
        for j in range(1, samples - i):
            w = np.array([i, j, samples - i - j], dtype=float) / samples
            x = normalize(w @ v)
            if any(point_in_face(t, x) for t in targets):
                hits.append(x)
    return hits


__all__ = [
    "Bird3D",
    "BirdParams",
    "CORNER_LABELS",
    "Crease",
    "DigonSheet",
    "Extension",
    "FlatBird",
    "FoldoutDiagram",
    "build_bird",
    "digon_foldout",
    "expand_wings",
    "extend_inner_wing",
    "extension_overlaps",
    "fold_flat_bird",
    "foldout_kawasaki",
    "replay_fold",
    "wing_theta_bound",
]

"""Single-vertex flat-foldability on the sphere.

A vertex pattern is a vertex plus one point on each crease leaving it.
Around the vertex the sphere looks like its tangent plane, so the
Kawasaki-Justin test reduces to arithmetic on the consecutive face angles.
:func:`fold_oracle` checks the same thing geometrically by composing the
crease reflections.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .sphere_core import _tol, as_vector, normalize, unit_point


def tangent_basis(v):
    """Deterministic orthonormal basis (e1, e2) of the tangent plane at v.

    e1 x e2 = v, so angles measured with atan2 in this basis increase
    counterclockwise seen from outside the sphere.
    """
    v = as_vector(v)
    helper = np.eye(3)[int(np.argmin(np.abs(v)))]
    e1 = normalize(helper - (helper @ v) * v)
    return e1, np.cross(v, e1)


def crease_directions(v, ends):
    """Tangent-plane angles (in :func:`tangent_basis`) of creases from v toward ``ends``."""
    e1, e2 = tangent_basis(v)
    out = []
    for x in ends:
        d = x - (x @ v) * v
        if np.linalg.norm(d) < 1e-12:
            raise ValidationError("crease endpoint coincides with the vertex or its antipode")
        out.append(float(np.arctan2(d @ e2, d @ e1)))
    return np.array(out)


@dataclass(frozen=True, eq=False)
class VertexPattern:
    """Creases meeting at ``vertex``; each crease is given by a point on it.

    ``ends`` need not be sorted; :attr:`ends` is stored counterclockwise,
    starting with the first crease passed in.
    """

    vertex: np.ndarray
    ends: np.ndarray
    face_angles: np.ndarray = field(init=False)

    def __post_init__(self):
        v = unit_point(self.vertex)
        ends = np.array([unit_point(e) for e in self.ends]).reshape(-1, 3)
        if len(ends) < 2:
            raise ValidationError("a vertex pattern needs at least two creases")
        phi = crease_directions(v, ends)
        rel = (phi - phi[0]) % (2 * np.pi)
        order = np.argsort(rel, kind="stable")
        rel = rel[order]
        angles = np.diff(np.append(rel, 2 * np.pi))
        if np.any(angles <= 1e-12):
            raise ValidationError("repeated crease (zero face angle)")
        object.__setattr__(self, "vertex", v)
        object.__setattr__(self, "ends", ends[order])
        object.__setattr__(self, "face_angles", angles)

    @classmethod
    def from_angles(cls, vertex, face_angles, start=0.0, reach=0.5):
        """Pattern whose consecutive face angles are ``face_angles``.

        Crease i leaves the vertex at tangent angle ``start + sum(face_angles[:i])``;
        its stored endpoint lies ``reach`` radians along the sphere.
        """
        v = unit_point(vertex)
        face_angles = np.asarray(face_angles, dtype=float)
        if abs(face_angles.sum() - 2 * np.pi) > 1e-9:
            raise ValidationError("face angles must sum to 2*pi")
        e1, e2 = tangent_basis(v)
        phis = start + np.concatenate([[0.0], np.cumsum(face_angles)[:-1]])
        ends = []
        for phi in phis:
            d = np.cos(phi) * e1 + np.sin(phi) * e2
            ends.append(np.cos(reach) * v + np.sin(reach) * d)
        return cls(v, np.array(ends))

    @property
    def poles(self):
        """Unit poles of the crease great circles."""
        return np.array([normalize(np.cross(self.vertex, e)) for e in self.ends])

    def __len__(self):
        return len(self.ends)

    def rotated(self, R):
        return VertexPattern(R @ self.vertex, self.ends @ R.T)

    def reindexed(self, k):
        """Same pattern with the crease list cyclically shifted by ``k``."""
        return VertexPattern(self.vertex, np.roll(self.ends, -k, axis=0))


def face_angles(pattern):
    return pattern.face_angles.copy()


@dataclass(frozen=True)
class KawasakiResult:
    foldable: bool
    alternating_sum: float
    n: int

    @property
    def even(self):
        return self.n % 2 == 0

    def __bool__(self):
        return self.foldable


def alternating_sum(angles):
    signs = np.where(np.arange(len(angles)) % 2 == 0, 1.0, -1.0)
    return float(np.sum(signs * angles))


def kawasaki_check(pattern, tol=None):
    """Even crease count and vanishing alternating sum of face angles."""
    tol = _tol(tol)
    a = pattern.face_angles
    s = alternating_sum(a)
    ok = len(a) % 2 == 0 and abs(s) < tol.align
    return KawasakiResult(bool(ok), s, len(a))


def ftiling_check(pattern, tol=None):
    """Both alternating partial sums equal pi.

    Each partial sum is compared at half the alignment tolerance: with the
    total fixed at 2*pi their deviations are +-(alternating sum)/2, so this
    gives exactly the same verdict as :func:`kawasaki_check`.
    """
    tol = _tol(tol)
    a = pattern.face_angles
    if len(a) % 2:
        return False
    odd, even = a[0::2].sum(), a[1::2].sum()
    return bool(max(abs(odd - np.pi), abs(even - np.pi)) < tol.align / 2)


def composite_reflection(pattern, x):
    """Apply the crease reflections in order to the 3-vector x."""
    for pole in pattern.poles:
        x = x - 2.0 * float(pole @ x) * pole
    return x


def fold_oracle(pattern, tol=None):
    """True iff composing all crease reflections gives the identity.

    Probes are the vertex and its tangent basis. The composite of an even
    number of reflections is a rotation about the vertex by twice the odd
    face-angle sum, which moves a tangent probe by 2 sin(|alt|/2); the
    threshold ``2 sin(align/2)`` matches the angle test.
    """
    tol = _tol(tol)
    v = pattern.vertex
    e1, e2 = tangent_basis(v)
    limit = 2.0 * np.sin(tol.align / 2.0)
    return all(np.linalg.norm(composite_reflection(pattern, p) - p) < limit for p in (v, e1, e2))


__all__ = [
    "KawasakiResult",
    "VertexPattern",
    "alternating_sum",
    "composite_reflection",
    "crease_directions",
    "face_angles",
    "fold_oracle",
    "ftiling_check",
    "kawasaki_check",
    "tangent_basis",
]

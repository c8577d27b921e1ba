"""Unit-sphere primitives.

Points on S^2 are plain ``numpy`` float arrays of shape (3,). Great circles
are represented by their unit pole; :class:`GreatCircle` wraps a pole in a
canonical sign so that two circles can be compared. Every function accepts
either a ``GreatCircle`` or a raw pole vector wherever a pole is expected.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AntipodalError, CoincidentCirclesError, ValidationError


@dataclass(frozen=True)
class Tolerances:
    unit: float = 1e-9  # |x| - 1
    align: float = 1e-9  # incidence / alignment residuals
    root: float = 1e-12  # root-finder termination
    dedup: float = 1e-7  # angular distance under which two solutions merge

    def __post_init__(self):
        vals = (self.unit, self.align, self.root, self.dedup)
        if any(not (v > 0) for v in vals):
            raise ValidationError("tolerances must be strictly positive")
        if not (self.root <= self.align <= self.dedup):
            raise ValidationError("tolerances must satisfy root <= align <= dedup")

    def scaled(self, align):
        """Copy with ``align`` replaced, keeping the ordering constraints."""
        return Tolerances(
            unit=max(self.unit, align),
            align=align,
            root=min(self.root, align),
            dedup=max(self.dedup, align),
        )


DEFAULT_TOL = Tolerances()


def _tol(tol):
    return DEFAULT_TOL if tol is None else tol


def as_vector(v):
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ValidationError(f"expected a 3-vector, got shape {a.shape}")
    return a


def normalize(v):
    v = as_vector(v)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValidationError("cannot normalize the zero vector")
    return v / n


def unit_point(v, tol=None):
    """Return ``v`` as a float array after checking that it has unit length."""
    tol = _tol(tol)
    a = as_vector(v)
    if not np.all(np.isfinite(a)) or abs(np.linalg.norm(a) - 1.0) > tol.unit:
        raise ValidationError(f"not a unit vector: {a.tolist()}")
    return a


def canonical_pole(a):
    """Sign-normalize a pole so that its first nonzero coordinate is positive.

    Coordinates with magnitude below 1e-12 count as zero, which keeps the
    choice stable for poles that are only numerically on a coordinate plane.
    """
    a = as_vector(a)
    for c in a:
        if abs(c) > 1e-12:
            return a if c > 0 else -a
    return a


@dataclass(frozen=True, eq=False)
class GreatCircle:
    """Great circle stored by its canonical unit pole."""

    pole: np.ndarray

    def __post_init__(self):
        p = canonical_pole(unit_point(self.pole))
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "pole", p)

    @classmethod
    def through(cls, p1, p2, tol=None):
        """Circle through two distinct, non-antipodal points."""
        return cls(pole_through(p1, p2, tol))

    def contains(self, p, tol=None):
        return abs(float(self.pole @ as_vector(p))) < _tol(tol).align

    def same_as(self, other, tol=None):
        return bool(np.allclose(self.pole, as_pole(other), atol=_tol(tol).align, rtol=0))

    def __repr__(self):
        x, y, z = self.pole
        return f"GreatCircle(pole=({x:.12g}, {y:.12g}, {z:.12g}))"


def as_pole(a, tol=None):
    """Unit pole vector of a ``GreatCircle`` or array-like."""
    if isinstance(a, GreatCircle):
        return a.pole
    return unit_point(a, tol)


@dataclass(frozen=True, eq=False)
class SmallCircle:
    """Circle ``{x : pole.x = pole.through}`` on the unit sphere."""

    pole: np.ndarray
    through: np.ndarray

    def __post_init__(self):
        pole = unit_point(self.pole)
        through = unit_point(self.through)
        if abs(float(pole @ through)) >= 1.0 - DEFAULT_TOL.align:
            raise ValidationError("small circle degenerates to a point")
        object.__setattr__(self, "pole", pole)
        object.__setattr__(self, "through", through)

    @property
    def height(self):
        """Signed distance of the circle's plane from the origin."""
        return float(self.pole @ self.through)

    @property
    def center(self):
        return self.height * self.pole

    @property
    def angular_radius(self):
        return float(np.arccos(np.clip(self.height, -1.0, 1.0)))

    def point(self, t):
        return small_circle_point(self, t)


@dataclass(frozen=True, eq=False)
class GeodesicArc:
    """Shorter great-circle arc from ``start`` to ``end``."""

    start: np.ndarray
    end: np.ndarray
    pole: np.ndarray = field(init=False)
    extent: float = field(init=False)

    def __post_init__(self):
        s = unit_point(self.start)
        e = unit_point(self.end)
        object.__setattr__(self, "start", s)
        object.__setattr__(self, "end", e)
        # raw (non-canonical) pole: rotating start about it by +extent gives end
        object.__setattr__(self, "pole", pole_through(s, e))
        object.__setattr__(self, "extent", spherical_distance(s, e))

    @property
    def circle(self):
        return GreatCircle(self.pole)

    def point(self, t):
        """Point at arc length ``t`` from start."""
        return rotate(self.start, self.pole, t)

    def sample(self, n):
        return np.array([self.point(t) for t in np.linspace(0.0, self.extent, n)])


def rotate(p, axis, theta, tol=None):
    """Rodrigues rotation of ``p`` about the unit ``axis`` by ``theta``."""
    p = unit_point(p, tol)
    a = as_pole(axis, tol)
    return _rot(p, a, theta)


def _cross(a, b):
    # np.cross carries noticeable per-call overhead for single 3-vectors
    return np.array([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])


def _rot(p, a, theta):
    # unchecked; also used for off-sphere vectors in the 3D fold code
    c, s = np.cos(theta), np.sin(theta)
    return p * c + _cross(a, p) * s + a * float(a @ p) * (1.0 - c)


def _rot_many(p, a, thetas):
    """``_rot`` for an array of angles; one row per angle."""
    t = np.asarray(thetas, dtype=float)[:, None]
    c, s = np.cos(t), np.sin(t)
    return p * c + _cross(a, p) * s + a * float(a @ p) * (1.0 - c)


def reflect(p, mirror, tol=None):
    """Mirror ``p`` in the plane of the great circle ``mirror``."""
    p = unit_point(p, tol)
    a = as_pole(mirror, tol)
    return p - 2.0 * float(a @ p) * a


def midpoint(p1, p2, tol=None):
    tol = _tol(tol)
    p1 = unit_point(p1, tol)
    p2 = unit_point(p2, tol)
    d = float(p1 @ p2)
    if d <= -1.0 + tol.align:
        raise AntipodalError("midpoint of antipodal points is not unique")
    return (p1 + p2) / (np.sqrt(2.0) * np.sqrt(1.0 + d))


def spherical_distance(p1, p2):
    return float(np.arccos(np.clip(np.dot(p1, p2), -1.0, 1.0)))


def pole_through(p1, p2, tol=None):
    """Unit pole ``p1 x p2 / |p1 x p2|`` of the circle through two points."""
    tol = _tol(tol)
    p1 = unit_point(p1, tol)
    p2 = unit_point(p2, tol)
    c = np.cross(p1, p2)
    n = np.linalg.norm(c)
    if n < tol.align:
        raise AntipodalError("points are equal or antipodal; no unique great circle")
    return c / n


def great_great_intersections(a1, a2, tol=None):
    """The antipodal pair ``(q, -q)`` where two distinct great circles meet.

    ``q`` is the one whose canonical sign is positive.
    """
    tol = _tol(tol)
    a1 = as_pole(a1, tol)
    a2 = as_pole(a2, tol)
    d = float(a1 @ a2)
    if abs(d) >= 1.0 - tol.align:
        raise CoincidentCirclesError("great circles coincide")
    q = canonical_pole(np.cross(a1, a2) / np.sqrt(1.0 - d * d))
    return q, -q


def small_circle_point(c, t):
    return _rot(c.through, c.pole, t)


SAMPLES = 720


def great_small_intersections(a1, c, tol=None, samples=SAMPLES):
    """Intersections of great circle ``a1`` with small circle ``c``.

    Solves ``a1 . rot(c.through, c.pole, t) = 0`` for ``t`` by sign-change
    bracketing on a uniform grid, followed by bisection. Grid minima of
    ``|f|`` are refined separately so that tangent or nearly tangent
    configurations, whose roots may fall within one grid cell, are not lost.
    Returns 0, 1 or 2 points, ordered by parameter ``t``.
    """
    tol = _tol(tol)
    a1 = as_pole(a1, tol)
    f = lambda t: float(a1 @ small_circle_point(c, t))  # noqa: E731
    grid = _rot_many(c.through, c.pole, _grid(samples)) @ a1
    ts = _circle_roots(f, tol, samples, grid)
    return [small_circle_point(c, t) for t in ts]


def _bisect(f, lo, hi, flo, eps):
    for _ in range(200):
        if hi - lo <= eps:
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _golden_extremum(f, lo, hi, sign, eps):
    # maximizes sign*f on [lo, hi]
    g = (np.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - g * (hi - lo)
    x2 = lo + g * (hi - lo)
    f1, f2 = sign * f(x1), sign * f(x2)
    for _ in range(200):
        if hi - lo <= eps:
            break
        if f1 > f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - g * (hi - lo)
            f1 = sign * f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + g * (hi - lo)
            f2 = sign * f(x2)
    return 0.5 * (lo + hi)


def _grid(samples):
    return np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)


def _circle_roots(f, tol, samples, values=None):
    """Roots of a 2pi-periodic scalar function on [0, 2pi).

    ``values``, if given, are f on the uniform grid of ``samples`` points,
    computed by the caller in one vectorized pass.
    """
    two_pi = 2.0 * np.pi
    ts = _grid(samples)
    fs = np.array([f(t) for t in ts]) if values is None else np.asarray(values, dtype=float)
    h = two_pi / samples
    roots = []
    for i in range(samples):
        j = (i + 1) % samples
        lo, flo, fhi = ts[i], fs[i], fs[j]
        if flo == 0.0:
            roots.append(lo)
        elif (flo > 0) != (fhi > 0) and fhi != 0.0:
            roots.append(_bisect(f, lo, lo + h, flo, tol.root))
    # extrema of f near zero that the grid stepped over
    for i in range(samples):
        fp, fc, fn = fs[i - 1], fs[i], fs[(i + 1) % samples]
        if abs(fc) > abs(fp) or abs(fc) > abs(fn):
            continue
        if (fp > 0) != (fc > 0) or (fn > 0) != (fc > 0):
            continue  # already bracketed
        sign = -1.0 if fc > 0 else 1.0  # seek the extremum that approaches zero
        t_ext = _golden_extremum(f, ts[i] - h, ts[i] + h, sign, tol.root)
        f_ext = f(t_ext)
        if abs(f_ext) < tol.align:
            roots.append(t_ext)
        elif (f_ext > 0) != (fc > 0):
            roots.append(_bisect(f, ts[i] - h, t_ext, f(ts[i] - h), tol.root))
            roots.append(_bisect(f, t_ext, ts[i] + h, f_ext, tol.root))
    out = []
    for t in sorted(t % two_pi for t in roots):
        if not any(_angle_gap(t, u) < tol.dedup for u in out):
            out.append(t)
    return out


def _angle_gap(a, b):
    d = abs(a - b) % (2.0 * np.pi)
    return min(d, 2.0 * np.pi - d)


def random_unit(rng, n=None):
    """Uniform random point(s) on the sphere from a numpy Generator."""
    shape = (3,) if n is None else (n, 3)
    v = rng.normal(size=shape)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def random_rotation(rng):
    """Uniform random rotation matrix (QR of a Gaussian matrix)."""
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q

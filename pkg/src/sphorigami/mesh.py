"""Triangle meshes of spherical faces and ASCII OBJ export."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import TessellationError, ValidationError
from .sphere_core import _rot, _rot_many, normalize

MIN_TRIANGLE_AREA = 1e-14


@dataclass(eq=False)
class TriangleMesh:
    vertices: np.ndarray
    triangles: np.ndarray
    groups: list = field(default_factory=list)  # (label, first triangle, count)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.triangles = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        if len(self.triangles) and (self.triangles.min() < 0 or self.triangles.max() >= len(self.vertices)):
            raise ValidationError("triangle index out of range")
        if not self.groups:
            self.groups = [("default", 0, len(self.triangles))]

    def triangle_areas(self):
        v = self.vertices[self.triangles]
        return 0.5 * np.linalg.norm(np.cross(v[:, 1] - v[:, 0], v[:, 2] - v[:, 0]), axis=1)

    def area(self):
        return float(self.triangle_areas().sum())

    def normals(self):
        v = self.vertices[self.triangles]
        return np.cross(v[:, 1] - v[:, 0], v[:, 2] - v[:, 0])

    @staticmethod
    def merge(meshes, by_label=False):
        """One mesh holding all inputs; ``by_label`` collects equal labels into one group."""
        if by_label:
            order = {}
            for m in meshes:
                order.setdefault(m.groups[0][0] if m.groups else "default", len(order))
            meshes = sorted(meshes, key=lambda m: order[m.groups[0][0] if m.groups else "default"])
        verts, tris, groups = [], [], []
        nv = nt = 0
        for m in meshes:
            verts.append(m.vertices)
            tris.append(m.triangles + nv)
            for lab, start, count in m.groups:
                if groups and groups[-1][0] == lab and groups[-1][1] + groups[-1][2] == start + nt:
                    groups[-1] = (lab, groups[-1][1], groups[-1][2] + count)
                else:
                    groups.append((lab, start + nt, count))
            nv += len(m.vertices)
            nt += len(m.triangles)
        if not verts:
            return TriangleMesh(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64), [("default", 0, 0)])
        return TriangleMesh(np.concatenate(verts), np.concatenate(tris), groups)


def _boundary(face, resolution):
    """Boundary samples, at least ``resolution`` per radian of arc length."""
    pts = []
    for i in range(len(face.vertices)):
        pole, sweep = face.edge(i)
        a = face.vertices[i] - face.center
        r = np.sqrt(max(0.0, 1.0 - float(pole @ a) ** 2))
        n = max(2, int(np.ceil(sweep * r * resolution)))
        ts = np.linspace(0.0, sweep, n + 1)[:-1]
        pts.extend(_rot_many(a, pole, ts))
    return np.array(pts)


def _hub(boundary):
    c = boundary.mean(axis=0)
    if np.linalg.norm(c) < 1e-9:
        # a full hemisphere: boundary mean vanishes, use the normal of the boundary plane
        u, s, vt = np.linalg.svd(boundary - c)
        n = vt[-1]
        turn = np.cross(boundary[0], boundary[len(boundary) // 4]) @ n
        return n if turn > 0 else -n
    return c / np.linalg.norm(c)


def tessellate_face(face, resolution=16, label="face"):
    """Triangulate a face, star-shaped about the normalized mean of its boundary.

    Each boundary sample is joined to the hub by a geodesic divided into equal
    steps, and neighbouring spokes are stitched ring by ring. Vertices lie
    exactly on the face's sphere; boundary vertices lie on the edge curves.
    """
    if resolution < 4:
        raise ValidationError("resolution must be at least 4 per radian")
    b = _boundary(face, resolution)
    hub = _hub(b)
    # spokes must sweep monotonically around the hub
    e1 = normalize(b[0] - (b[0] @ hub) * hub)
    e2 = np.cross(hub, e1)
    d = b - np.outer(b @ hub, hub)
    ang = np.unwrap(np.arctan2(d @ e2, d @ e1))
    steps = np.diff(np.append(ang, ang[0] + 2 * np.pi))
    if np.any(b @ hub < -1e-9):
        raise TessellationError("face boundary reaches the far side of its hub")
    if np.any(steps <= 0) or abs(ang[-1] - ang[0] + steps[-1] - 2 * np.pi) > 1e-6:
        raise TessellationError("face boundary is not simple around its hub")
    radius = float(np.max(np.arccos(np.clip(b @ hub, -1.0, 1.0))))
    rings = max(1, int(np.ceil(radius * resolution)))
    m = len(b)
    verts = [hub]
    for r in range(1, rings + 1):
        s = r / rings
        for x in b:
            if r == rings:
                verts.append(x)
            else:
                axis = np.cross(hub, x)
                axis /= np.linalg.norm(axis)
                verts.append(_rot(hub, axis, s * np.arccos(np.clip(hub @ x, -1.0, 1.0))))
    verts = np.array(verts)
    tris = []
    ring = lambda r, j: 1 + (r - 1) * m + (j % m)  # noqa: E731
    for j in range(m):
        tris.append((0, ring(1, j), ring(1, j + 1)))
    for r in range(1, rings):
        for j in range(m):
            a, bb = ring(r, j), ring(r, j + 1)
            c, dd = ring(r + 1, j), ring(r + 1, j + 1)
            tris.append((a, c, dd))
            tris.append((a, dd, bb))
    tris = np.array(tris)
    verts = verts + face.center
    mesh = TriangleMesh(verts, tris)
    keep = mesh.triangle_areas() > MIN_TRIANGLE_AREA
    mesh = TriangleMesh(verts, tris[keep], [(label, 0, int(keep.sum()))])
    # outward winding: normals point away from the face's sphere centre
    v = mesh.vertices[mesh.triangles]
    out = np.einsum("ij,ij->i", mesh.normals(), v.mean(axis=1) - face.center)
    if np.any(out <= 0):
        raise TessellationError("could not orient every triangle outward")
    return mesh


def _fmt(x):
    s = f"{x:.9g}"
    return "0" if s == "-0" else s


def obj_text(meshes):
    """OBJ text for a list of meshes; each mesh's groups become ``g`` blocks."""
    lines = []
    offset = 0
    for mesh in meshes:
        for x, y, z in mesh.vertices:
            lines.append(f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}")
    for mesh in meshes:
        for label, start, count in mesh.groups:
            lines.append(f"g {label}")
            for t in mesh.triangles[start : start + count]:
                i, j, k = (int(t[0]) + offset + 1, int(t[1]) + offset + 1, int(t[2]) + offset + 1)
                lines.append(f"f {i} {j} {k}")
        offset += len(mesh.vertices)
    return "\n".join(lines) + "\n"


def export_obj(meshes, path):
    if isinstance(meshes, TriangleMesh):
        meshes = [meshes]
    text = obj_text(meshes)
    with open(os.fspath(path), "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)
    return path


def parse_obj(text):
    """Vertices, 0-based triangles and group labels read back from OBJ text."""
    verts, tris, groups = [], [], []
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(p) for p in parts[1:4]])
        elif parts[0] == "f":
            tris.append([int(p.split("/")[0]) - 1 for p in parts[1:4]])
            if groups:
                groups[-1][2] += 1
        elif parts[0] == "g":
            groups.append([parts[1] if len(parts) > 1 else "", len(tris), 0])
    return np.array(verts).reshape(-1, 3), np.array(tris, dtype=np.int64).reshape(-1, 3), [tuple(g) for g in groups]


__all__ = ["TriangleMesh", "export_obj", "obj_text", "parse_obj", "tessellate_face"]

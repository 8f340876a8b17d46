"""Convex polyhedra as vertex arrays plus outward counter-clockwise face loops."""
from __future__ import annotations

import io
import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial import ConvexHull

from .errors import GeometryDomainError
from .geometry import newell_normal

MERGE_TOL = 1e-9


def _order_ccw(points: np.ndarray, idx: list[int], normal: np.ndarray) -> list[int]:
    """Sort coplanar points counter-clockwise when seen from the tip of ``normal``."""
    pts = points[idx]
    c = pts.mean(axis=0)
    n = normal / np.linalg.norm(normal)
    e1 = pts[0] - c
    e1 -= np.dot(e1, n) * n
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    ang = np.arctan2((pts - c) @ e2, (pts - c) @ e1)
    return [idx[i] for i in np.argsort(ang, kind="stable")]


def _dedupe(points: np.ndarray, tol: float) -> np.ndarray:
    out: list[np.ndarray] = []
    for p in points:
        if not any(np.linalg.norm(p - q) <= tol for q in out):
            out.append(p)
    return np.array(out)


@dataclass
class Polyhedron:
    vertices: np.ndarray
    faces: list[tuple[int, ...]]
    tangent_points: list[np.ndarray] | None = None
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float)
        self.faces = [tuple(int(i) for i in f) for f in self.faces]

    # --- construction -----------------------------------------------------

    @classmethod
    def from_tangent_planes(cls, normals, distance: float = 1.0, name: str = "") -> "Polyhedron":
        """Intersection of the half-spaces ``n_i . x <= distance``.

        Vertices are the feasible intersections of plane triples; each face
        keeps its tangent point ``distance * n_i``.
        """
        ns = np.array([np.asarray(n, float) / np.linalg.norm(n) for n in normals])
        cands = []
        for i, j, k in itertools.combinations(range(len(ns)), 3):
            m = ns[[i, j, k]]
            if abs(np.linalg.det(m)) < 1e-12:
                continue
            x = np.linalg.solve(m, np.full(3, distance))
            if (ns @ x <= distance + MERGE_TOL).all():
                cands.append(x)
        if not cands:
            raise GeometryDomainError("tangent planes do not bound a polyhedron")
        verts = _dedupe(np.array(cands), MERGE_TOL)
        faces = []
        for n in ns:
            on = [v for v in range(len(verts)) if abs(verts[v] @ n - distance) <= MERGE_TOL]
            if len(on) < 3:
                raise GeometryDomainError("a tangent plane touches the body in fewer than 3 vertices")
            faces.append(tuple(_order_ccw(verts, on, n)))
        return cls(verts, faces, [distance * n for n in ns], name)

    @classmethod
    def from_points(cls, points, name: str = "") -> "Polyhedron":
        """Convex body of the given points; coplanar hull facets are merged.

        Every input point must be a hull vertex; vertex order is preserved.
        """
        pts = np.asarray(points, dtype=float)
        hull = ConvexHull(pts)
        if len(hull.vertices) != len(pts):
            raise GeometryDomainError("some points are not vertices of their convex hull")
        groups: list[tuple[np.ndarray, float, set]] = []
        for simplex, eq in zip(hull.simplices, hull.equations):
            n, d = eq[:3], eq[3]
            for gn, gd, members in groups:
                if np.allclose(gn, n, atol=1e-9) and abs(gd - d) <= 1e-9:
                    members.update(simplex.tolist())
                    break
            else:
                groups.append((n, d, set(simplex.tolist())))
        faces = [tuple(_order_ccw(pts, sorted(m), n)) for n, _, m in groups]
        return cls(pts, faces, None, name)

    # --- topology ---------------------------------------------------------

    @property
    def directed_edges(self) -> list[tuple[int, int]]:
        return [(f[i], f[(i + 1) % len(f)]) for f in self.faces for i in range(len(f))]

    @property
    def edges(self) -> set[tuple[int, int]]:
        return {(min(a, b), max(a, b)) for a, b in self.directed_edges}

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    def is_closed(self) -> bool:
        de = self.directed_edges
        seen = set(de)
        if len(seen) != len(de):
            return False
        return all((b, a) in seen for a, b in de)

    def check_closed(self) -> None:
        if not self.is_closed():
            raise GeometryDomainError(f"polyhedron {self.name!r} is not a closed oriented surface")

    def vertex_faces(self, v: int) -> list[int]:
        return [i for i, f in enumerate(self.faces) if v in f]

    def vertex_neighbor_loop(self, v: int) -> list[int]:
        """Neighbours of ``v`` in cyclic order, walking across incident faces."""
        succ = {}
        for f in self.faces:
            if v in f:
                k = f.index(v)
                succ[f[k - 1]] = f[(k + 1) % len(f)]
        if not succ:
            raise GeometryDomainError(f"vertex {v} is on no face")
        start = next(iter(succ))
        loop = [start]
        while True:
            nxt = succ.get(loop[-1])
            if nxt is None:
                raise GeometryDomainError(f"faces around vertex {v} do not close")
            if nxt == start:
                break
            loop.append(nxt)
            if len(loop) > len(succ):
                raise GeometryDomainError(f"faces around vertex {v} do not close")
        # succ maps predecessor -> successor within each face; following
        # successors walks neighbours clockwise seen from outside
        return loop

    # --- metric -----------------------------------------------------------

    def face_points(self, i: int) -> np.ndarray:
        return self.vertices[list(self.faces[i])]

    def face_normal(self, i: int) -> np.ndarray:
        n = newell_normal(self.face_points(i))
        return n / np.linalg.norm(n)

    def face_area(self, i: int) -> float:
        return float(np.linalg.norm(newell_normal(self.face_points(i))))

    def face_plane(self, i: int) -> tuple[np.ndarray, float]:
        """Unit outward normal and offset; uses the tangent point when present."""
        if self.tangent_points is not None:
            t = np.asarray(self.tangent_points[i], float)
            d = float(np.linalg.norm(t))
            return t / d, d
        n = self.face_normal(i)
        return n, float(n @ self.face_points(i).mean(axis=0))

    def face_planarity(self, i: int) -> float:
        n = self.face_normal(i)
        pts = self.face_points(i)
        return float(np.abs((pts - pts.mean(axis=0)) @ n).max())

    def face_distances(self) -> np.ndarray:
        """Distance from the origin to each face plane along the outward normal."""
        out = []
        for i in range(len(self.faces)):
            n = self.face_normal(i)
            out.append(float(n @ self.face_points(i).mean(axis=0)))
        return np.array(out)

    def volume(self) -> float:
        """Signed volume by tetrahedra from the vertex centroid to fan triangles."""
        c = self.vertices.mean(axis=0)
        total = 0.0
        for f in self.faces:
            p = self.vertices[list(f)] - c
            for k in range(1, len(f) - 1):
                total += float(np.dot(p[0], np.cross(p[k], p[k + 1])))
        return total / 6.0

    def is_convex(self, tol: float = 1e-9) -> bool:
        for i in range(len(self.faces)):
            n = self.face_normal(i)
            d = n @ self.face_points(i).mean(axis=0)
            if (self.vertices @ n > d + tol).any():
                return False
        return True

    def plane_angle(self, face: int, v: int) -> float:
        f = self.faces[face]
        k = f.index(v)
        a = self.vertices[f[k - 1]] - self.vertices[v]
        b = self.vertices[f[(k + 1) % len(f)]] - self.vertices[v]
        return math.atan2(float(np.linalg.norm(np.cross(a, b))), float(a @ b))

    def edge_lengths(self) -> np.ndarray:
        return np.array([np.linalg.norm(self.vertices[a] - self.vertices[b])
                         for a, b in sorted(self.edges)])

    def circumradius(self, center=(0.0, 0.0, 0.0)) -> float:
        return float(np.linalg.norm(self.vertices - np.asarray(center), axis=1).max())

    def translated(self, shift) -> "Polyhedron":
        s = np.asarray(shift, float)
        tp = None if self.tangent_points is None else [t + s for t in self.tangent_points]
        return Polyhedron(self.vertices + s, list(self.faces), tp, self.name)

    # --- OFF text format --------------------------------------------------

    def to_off(self, precision: int = 12) -> str:
        buf = io.StringIO()
        buf.write("OFF\n")
        buf.write(f"{len(self.vertices)} {len(self.faces)} {len(self.edges)}\n")
        for x, y, z in self.vertices:
            buf.write(f"{x:.{precision}f} {y:.{precision}f} {z:.{precision}f}\n")
        for f in self.faces:
            buf.write(" ".join(map(str, (len(f),) + f)) + "\n")
        return buf.getvalue()

    def write_off(self, path) -> None:
        Path(path).write_text(self.to_off())


def read_off(text: str, name: str = "") -> Polyhedron:
    """Parse the OFF layout written by :meth:`Polyhedron.to_off`."""
    lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != "OFF":
        raise GeometryDomainError("missing OFF header")
    nv, nf, _ = (int(t) for t in lines[1].split())
    verts = [[float(t) for t in lines[2 + i].split()[:3]] for i in range(nv)]
    faces = []
    for i in range(nf):
        toks = [int(t) for t in lines[2 + nv + i].split()]
        if toks[0] != len(toks) - 1:
            raise GeometryDomainError(f"face line {i} has wrong vertex count")
        faces.append(tuple(toks[1:]))
    return Polyhedron(np.array(verts), faces, None, name)

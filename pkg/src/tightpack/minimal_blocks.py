"""Minimum-volume blocks with a unit sphere centred at every vertex.

Vertices must stay at least 2 apart so the vertex spheres do not overlap.
The tetrahedron, pentahedron and hexahedron (parallelepiped) families come in
two kinds each: ``_A`` built on the side-2 equilateral layer triangle and
``_B`` on the right-angled corner with legs along the axes.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import GeometryDomainError
from .geometry import as_vec3, polygon_cone_solid_angle
from .polyhedron import Polyhedron

R2, R3 = math.sqrt(2), math.sqrt(3)
_H = 2 / math.sqrt(1.5)
_S3 = 1 / R3
SPHERE_VOLUME = 4 * math.pi / 3
MIN_DISTANCE = 2.0

VERTICES = {
    "tetra_A": [(-1, 0, 0), (1, 0, 0), (0, R3, 0), (0, _S3, _H)],
    "tetra_B": [(-R2, 0, 0), (R2, 0, 0), (0, R2, 0), (0, 0, R2)],
    "penta_A": [(-1, 0, 0), (1, 0, 0), (2, R3, 0), (0, R3, 0), (0, _S3, _H)],
    "penta_B": [(-R2, 0, 0), (0, -R2, 0), (R2, 0, 0), (0, R2, 0), (0, 0, R2)],
    "hexa_A": [(-1, 0, 0), (1, 0, 0), (2, R3, 0), (0, R3, 0),
               (0, _S3, _H), (2, _S3, _H), (3, R3 + _S3, _H), (1, R3 + _S3, _H)],
    "hexa_B": [(-R2, 0, 0), (0, -R2, 0), (R2, 0, 0), (0, R2, 0),
               (0, 0, R2), (R2, -R2, R2), (math.sqrt(8), 0, R2), (R2, R2, R2)],
}
VOLUMES = {
    "tetra_A": 2 * R2 / 3, "tetra_B": 2 * R2 / 3,
    "penta_A": 4 * R2 / 3, "penta_B": 4 * R2 / 3,
    "hexa_A": 4 * R2, "hexa_B": 4 * R2,
}
KINDS = tuple(VERTICES)


def tetra_volume_profile(x: float) -> float:
    """Smallest tetrahedron volume at half-base ``x`` once all distance constraints bind.

    With the base edge ``2x`` fixed the active constraints force
    ``y = sqrt(4 - x^2)`` and ``z = 2 sqrt((3 - x^2)/(4 - x^2))``, leaving
    ``2 x sqrt(3 - x^2) / 3``.  The apex offset ``y3 = (2 - x^2)/sqrt(4 - x^2)``
    must be non-negative, which caps ``x`` at ``sqrt 2``.
    """
    if not (1.0 <= x <= R2):
        raise GeometryDomainError(f"x={x!r} not in [1, sqrt 2]")
    return 2 * x * math.sqrt(3 - x * x) / 3


def tetra_coordinates(x: float) -> np.ndarray:
    """The active-constraint tetrahedron for half-base ``x``."""
    if not (1.0 <= x <= R2):
        raise GeometryDomainError(f"x={x!r} not in [1, sqrt 2]")
    y = math.sqrt(4 - x * x)
    y3 = (2 - x * x) / y
    z = 2 * math.sqrt((3 - x * x) / (4 - x * x))
    return np.array([(-x, 0, 0), (x, 0, 0), (0, y, 0), (0, y3, z)])


@dataclass
class VertexSphereBlock:
    polyhedron: Polyhedron
    kind: str = ""

    @property
    def vertices(self) -> np.ndarray:
        return self.polyhedron.vertices

    def pair_distances(self) -> dict[tuple[int, int], float]:
        v = self.vertices
        return {(i, j): float(np.linalg.norm(v[i] - v[j]))
                for i, j in itertools.combinations(range(len(v)), 2)}

    def check(self, tol: float = 1e-12) -> None:
        for (i, j), d in self.pair_distances().items():
            if d < MIN_DISTANCE - tol:
                raise GeometryDomainError(
                    f"vertices {i} and {j} are {d!r} apart; vertex spheres overlap")

    def vertex_solid_angles(self) -> list[float]:
        p = self.polyhedron
        out = []
        for v in range(len(p.vertices)):
            loop = p.vertex_neighbor_loop(v)
            base = p.vertices[loop]
            _check_convex_cone(p.vertices[v], base, v)
            out.append(polygon_cone_solid_angle(p.vertices[v], base))
        return out

    def volume(self) -> float:
        return self.polyhedron.volume()


def _check_convex_cone(apex, loop, v):
    # The neighbour loop runs clockwise seen from outside, so every consecutive
    # ray triple of a convex corner has a positive triple product; a reflex or
    # flat corner gives a non-positive one.
    rays = np.asarray(loop, float) - as_vec3(apex)
    n = len(rays)
    triples = [np.dot(rays[k], np.cross(rays[(k + 1) % n], rays[(k + 2) % n])) for k in range(n)]
    if min(triples) <= 0.0:
        raise GeometryDomainError(f"vertex figure at vertex {v} is not convex")


def minimal_block(kind: str) -> VertexSphereBlock:
    if kind not in VERTICES:
        raise GeometryDomainError(f"unknown block {kind!r}; use one of {KINDS}")
    blk = VertexSphereBlock(Polyhedron.from_points(VERTICES[kind], kind), kind)
    blk.check()
    return blk


class SphereAccount(NamedTuple):
    total_omega: float
    density: float


def vertex_sphere_density(b: VertexSphereBlock) -> SphereAccount:
    """Total vertex solid angle and the share of the block filled by vertex spheres."""
    b.check()
    total = math.fsum(b.vertex_solid_angles())
    return SphereAccount(total, total / 3 / b.volume())


def cube_block(side: float = 2.0) -> VertexSphereBlock:
    pts = list(itertools.product((0.0, side), repeat=3))
    return VertexSphereBlock(Polyhedron.from_points(pts, "cube"), "cube")


def split_prism(kind: str) -> tuple[VertexSphereBlock, VertexSphereBlock]:
    """Cut a parallelepiped into two triangular prisms.

    The cut runs through a diagonal of the bottom face and the parallel
    diagonal of the top face.  Of the two diagonal choices the one through the
    lexicographically smaller vertex pair is used.
    """
    if kind not in ("hexa_A", "hexa_B"):
        raise GeometryDomainError(f"only hexa_A and hexa_B split into prisms, not {kind!r}")
    v = np.array(VERTICES[kind], float)
    bottom, top = [0, 1, 2, 3], [4, 5, 6, 7]
    shift = v[4] - v[0]
    if not np.allclose(v[top], v[bottom] + shift):
        raise GeometryDomainError(f"{kind} is not a parallelepiped")
    # bottom loop 0-1-2-3 has diagonals (0, 2) and (1, 3); cut along (0, 2)
    halves = []
    for side in ((0, 1, 2), (0, 2, 3)):
        idx = list(side) + [i + 4 for i in side]
        halves.append(VertexSphereBlock(
            Polyhedron.from_points(v[idx], f"{kind} prism"), f"{kind}_prism"))
    for h in halves:
        h.check()
    return halves[0], halves[1]


class Constraint(NamedTuple):
    pair: tuple[int, int]
    label: str
    squared_distance: float
    active: bool
    violated: bool


@dataclass
class ActivityReport:
    kind: str
    constraints: list

    @property
    def active(self) -> list:
        return [c for c in self.constraints if c.active]

    @property
    def violated(self) -> list:
        return [c for c in self.constraints if c.violated]

    @property
    def ok(self) -> bool:
        return not self.violated


# Pair labels for the tetrahedron layout (-x,0,0), (x,0,0), (x2,y,0), (x3,y3,z).
TETRA_LABELS = {
    (0, 1): "x >= 1",
    (1, 2): "(x2 - x)^2 + y^2 >= 4",
    (0, 2): "(x2 + x)^2 + y^2 >= 4",
    (1, 3): "(x3 - x)^2 + y3^2 + z^2 >= 4",
    (0, 3): "(x3 + x)^2 + y3^2 + z^2 >= 4",
    (2, 3): "(x3 - x2)^2 + (y3 - y)^2 + z^2 >= 4",
}


def verify_constraint_activity(block, tol: float = 1e-10) -> ActivityReport:
    """Which pairwise ``|v_i - v_j|^2 >= 4`` constraints bind, and whether any fails."""
    if isinstance(block, str):
        block = minimal_block(block)
    tetra = len(block.vertices) == 4
    out = []
    for (i, j), d in block.pair_distances().items():
        d2 = d * d
        label = TETRA_LABELS[(i, j)] if tetra else f"|v{i} - v{j}|^2 >= 4"
        out.append(Constraint((i, j), label, d2, abs(d2 - 4) <= tol, d2 < 4 - tol))
    return ActivityReport(block.kind, out)


def perturbed(block: VertexSphereBlock, vertex: int, delta) -> VertexSphereBlock:
    """Copy of ``block`` with one vertex moved by ``delta`` (faces kept)."""
    p = block.polyhedron
    v = p.vertices.copy()
    v[vertex] += np.asarray(delta, float)
    return VertexSphereBlock(Polyhedron(v, list(p.faces), None, p.name), block.kind)


class MinimalityReport(NamedTuple):
    trials: int
    decreases: int
    min_volume_change: float
    unrepaired: int


def _repair(v: np.ndarray, sweeps: int = 500) -> np.ndarray:
    """Push apart vertex pairs closer than 2 until none remain."""
    v = v.copy()
    i, j = np.triu_indices(len(v), 1)
    for _ in range(sweeps):
        d = v[j] - v[i]
        n = np.linalg.norm(d, axis=1)
        bad = n < MIN_DISTANCE
        if not bad.any():
            break
        # aim slightly past 2 so rounding cannot leave a pair just short
        push = ((MIN_DISTANCE + 1e-12 - n[bad]) / 2 / n[bad])[:, None] * d[bad]
        np.add.at(v, i[bad], -push)
        np.add.at(v, j[bad], push)
    return v


def minimality_spot_check(kind: str = "hexa_A", trials: int = 10_000, scale: float = 1e-2,
                          seed: int = 0, tol: float = 1e-12) -> MinimalityReport:
    """Random vertex moves repaired back to spacing >= 2 never shrink the block.

    The volume of a moved block is taken over the original face loops, fan
    triangulated.
    """
    blk = minimal_block(kind)
    base = blk.polyhedron
    v0 = base.volume()
    rng = np.random.default_rng(seed)
    decreases, worst, unrepaired = 0, math.inf, 0
    i, j = np.triu_indices(len(base.vertices), 1)
    for _ in range(trials):
        v = _repair(base.vertices + rng.normal(scale=scale, size=base.vertices.shape))
        if np.linalg.norm(v[j] - v[i], axis=1).min() < MIN_DISTANCE:
            unrepaired += 1
            continue
        dv = Polyhedron(v, list(base.faces)).volume() - v0
        worst = min(worst, dv)
        if dv < -tol:
            decreases += 1
    return MinimalityReport(trials, decreases, worst, unrepaired)

"""Tight quadrilateral pyramids with solid angle pi/3 and the two dodecahedral blocks.

Twelve congruent tight pyramids around one sphere must each take a solid
angle of ``4 pi / 12 = pi / 3``.  The one-parameter families below are solved
for that constraint, and the two space-filling dodecahedra are built from the
tangent planes towards the twelve touching neighbours of a close packing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq
from scipy.spatial import cKDTree
from scipy.stats import qmc

from . import barlow
from .errors import GeometryDomainError, SolverError
from .polyhedron import Polyhedron
from .pyramids import APOTHEM, TightPyramid, tight_pyramid_metrics, wedge_solid_angle

TARGET_OMEGA = math.pi / 3
KEPLER_DENSITY = math.pi / math.sqrt(18)
ATAN_SQRT2 = math.atan(math.sqrt(2))
SPHERE_VOLUME = 4 * math.pi / 3


@dataclass(frozen=True)
class QuadComposition(TightPyramid):
    def __post_init__(self):
        super().__post_init__()
        if len(self.alphas) != 4:
            raise GeometryDomainError(f"need exactly 4 half-angles, got {len(self.alphas)}")


def face_solid_angle(alphas) -> float:
    return tight_pyramid_metrics(TightPyramid(tuple(alphas))).omega


def face_area(alphas) -> float:
    return math.fsum(math.tan(a) for a in alphas) * APOTHEM**2


def _solve(f, lo, hi, what, xtol=1e-15):
    flo, fhi = f(lo), f(hi)
    if not flo * fhi < 0:
        raise SolverError(f"{what}: root not bracketed on [{lo!r}, {hi!r}] "
                          f"(f = {flo!r}, {fhi!r})", (lo, hi), (flo, fhi))
    try:
        x, res = brentq(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps,
                        maxiter=200, full_output=True)
    except RuntimeError as exc:
        raise SolverError(f"{what}: {exc}", (lo, hi), (flo, fhi)) from exc
    if not res.converged:
        raise SolverError(f"{what}: no convergence after {res.iterations} steps",
                          (lo, hi), (flo, fhi))
    return x


class FamilyThree(NamedTuple):
    alpha: float
    mirror: float
    composition: QuadComposition
    residual: float


def solve_family_three() -> FamilyThree:
    """Solve (a, pi/2 - a, pi/2 - a, a) for face solid angle pi/3.

    The family is symmetric about a = pi/4, so the mirror root is pi/2 - a.
    """
    def g(a):
        return face_solid_angle((a, math.pi / 2 - a, math.pi / 2 - a, a)) - TARGET_OMEGA

    a = _solve(g, math.pi / 4, math.pi / 2 - 1e-9, "family (a, pi/2-a, pi/2-a, a)")
    comp = QuadComposition((a, math.pi / 2 - a, math.pi / 2 - a, a))
    return FamilyThree(a, math.pi / 2 - a, comp, g(a))


class FamilyTwo(NamedTuple):
    alpha_deg: float
    alpha3_deg: float
    vertex_angle_deg: float
    closure_fails: bool
    residual: float


def solve_family_two() -> FamilyTwo:
    """Solve (a, a, pi - 3a, a) for face solid angle pi/3 on a in (pi/4, pi/3).

    The odd angle ``pi - 3a`` gives the base corner ``pi - 2(pi - 3a)``; three
    such corners already exceed a full turn, so no vertex can close.
    """
    def g(a):
        return face_solid_angle((a, a, math.pi - 3 * a, a)) - TARGET_OMEGA

    a = _solve(g, math.pi / 4, math.pi / 3 - 1e-9, "family (a, a, pi-3a, a)")
    a3 = math.pi - 3 * a
    corner = math.degrees(math.pi - 2 * a3)
    return FamilyTwo(math.degrees(a), math.degrees(a3), corner, 3 * corner > 360.0, g(a))


def _omega_free(alphas) -> float:
    """Face solid angle without the angle-sum check (for derivatives off the plane)."""
    return 2 * math.fsum(wedge_solid_angle(a) for a in alphas)


def _gradients(alphas, step: float = 1e-6) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(alphas, float)
    eye = np.eye(len(a))
    g_omega = np.array([(_omega_free(a + step * e) - _omega_free(a - step * e)) / (2 * step)
                        for e in eye])
    g_area = APOTHEM**2 / np.cos(a) ** 2
    return g_area, g_omega


def stationarity_residual(alphas) -> float:
    """Distance of the area gradient from span(grad sum, grad omega), relative to its size.

    Zero at a constrained critical point of the base area on the surface
    ``sum(alpha) = pi``, ``omega = pi/3``.
    """
    g_area, g_omega = _gradients(alphas)
    basis = np.column_stack([np.ones(len(g_area)), g_omega])
    coef, *_ = np.linalg.lstsq(basis, g_area, rcond=None)
    return float(np.linalg.norm(basis @ coef - g_area) / np.linalg.norm(g_area))


class LevelSetReport(NamedTuple):
    trials: int
    decreases: int
    min_area_change: float
    smallest: tuple


def level_set_area_check(alphas, trials: int = 10_000, scale: float = 0.3,
                         seed: int = 0, tol: float = 1e-12) -> LevelSetReport:
    """Sample quad compositions on the pi/3 level set near ``alphas`` and compare areas.

    A random step inside the plane ``sum(alpha) = pi`` and orthogonal to the
    solid-angle gradient is pulled back onto the level set along that gradient
    by root solving.  Trials that leave ``(0, pi/2)`` or fail to bracket are
    drawn again.
    """
    a0 = np.asarray(alphas, float)
    area0 = face_area(a0)
    _, g = _gradients(a0)
    g = g - g.mean()
    g /= np.linalg.norm(g)
    rng = np.random.default_rng(seed)
    decreases, worst, smallest, done = 0, math.inf, tuple(a0), 0
    while done < trials:
        d = rng.standard_normal(len(a0))
        d -= d.mean()
        d -= (d @ g) * g
        d *= rng.uniform(0, scale) / np.linalg.norm(d)
        q = a0 + d

        def f(t):
            return _omega_free(q + t * g) - TARGET_OMEGA

        try:
            t = brentq(f, -scale - 0.2, scale + 0.2, xtol=1e-15)
        except ValueError:
            continue
        r = q + t * g
        if (r <= 0).any() or (r >= math.pi / 2).any():
            continue
        done += 1
        dA = face_area(r) - area0
        if dA < worst:
            worst, smallest = dA, tuple(r)
        decreases += dA < -tol
    return LevelSetReport(trials, decreases, worst, smallest)


def closure_feasible(alphas, tol: float = 0.0) -> bool:
    """Whether every base corner can sit at a vertex where three equal corners meet.

    Corner i of a base with half-angle ``alpha_i`` is ``pi - 2 alpha_i``; three
    equal corners close only below a full turn, i.e. ``alpha_i > pi/6``.
    """
    return min(alphas) > math.pi / 6 + tol


@dataclass
class PentagonReport:
    grid_resolution: int
    level_points: list = field(default_factory=list)
    feasible: list = field(default_factory=list)
    regular_omega: float = 0.0
    max_feasible_omega: float = 0.0

    @property
    def ok(self) -> bool:
        """No closure-feasible point found and the level set is non-empty."""
        return not self.feasible and bool(self.level_points)


def pentagon_family_check(grid_resolution: int = 100) -> PentagonReport:
    """Scan mirror-symmetric tight pentagons {a, a, b, b, c} on the pi/3 level set.

    For each ``a`` on the grid the level set is bracketed along ``b`` and
    refined by root solving; every hit is tested with :func:`closure_feasible`.
    ``max_feasible_omega`` is the solid angle at (pi/6, pi/6, pi/6, pi/6, pi/3),
    a vertex of the closure-feasible region.
    """
    if grid_resolution < 10:
        raise GeometryDomainError("grid_resolution must be at least 10")
    n = grid_resolution
    rep = PentagonReport(n)
    rep.regular_omega = face_solid_angle((math.pi / 5,) * 5)
    rep.max_feasible_omega = face_solid_angle((math.pi / 6,) * 4 + (math.pi / 3,))
    half = math.pi / 2

    def comp(a, b):
        return (a, a, b, b, math.pi - 2 * a - 2 * b)

    def g(a, b):
        return face_solid_angle(comp(a, b)) - TARGET_OMEGA

    eps = 1e-9
    for i in range(n):
        a = (i + 0.5) / n * half
        lo = max(0.0, math.pi / 4 - a) + eps
        hi = min(half, half - a) - eps
        if not lo < hi:
            continue
        bs = np.linspace(lo, hi, n + 1)
        vals = [g(a, b) for b in bs]
        for b0, b1, v0, v1 in zip(bs[:-1], bs[1:], vals[:-1], vals[1:]):
            if v0 == 0.0:
                b = b0
            elif v0 * v1 < 0:
                b = _solve(lambda t: g(a, t), b0, b1, "pentagon level set")
            else:
                continue
            c = comp(a, b)
            rep.level_points.append(c)
            if closure_feasible(c):
                rep.feasible.append(c)
    return rep


# --- the two dodecahedra ------------------------------------------------------

def fcc_contact_directions() -> np.ndarray:
    """The twelve (+-1, +-1, 0)/sqrt 2 directions, cubic orientation."""
    dirs = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        for si in (1, -1):
            for sj in (1, -1):
                v = np.zeros(3)
                v[i], v[j] = si, sj
                dirs.append(v / math.sqrt(2))
    return np.array(dirs)


def hcp_contact_directions() -> np.ndarray:
    """Six in-layer directions plus three above and three mirrored below."""
    ring = [(math.cos(k * math.pi / 3), math.sin(k * math.pi / 3), 0.0) for k in range(6)]
    h = barlow.LAYER_SPACING / 2
    up = [(x / 2, y / 2, h) for x, y in (barlow.COSETS["B"],
                                         barlow.COSETS["B"] - (2.0, 0.0),
                                         barlow.COSETS["B"] - (1.0, math.sqrt(3)))]
    down = [(x, y, -z) for x, y, z in up]
    return np.array(ring + up + down)


def tight_dodecahedron(directions, name: str = "") -> Polyhedron:
    """Block bounded by the unit sphere's tangent planes towards its contacts."""
    return Polyhedron.from_tangent_planes(directions, 1.0, name)


def build_rhombic_dodecahedron() -> Polyhedron:
    return tight_dodecahedron(fcc_contact_directions(), "rhombic dodecahedron")


def build_trapezo_rhombic_dodecahedron() -> Polyhedron:
    return tight_dodecahedron(hcp_contact_directions(), "trapezo-rhombic dodecahedron")


class FaceComposition(NamedTuple):
    alphas: tuple[float, ...]
    apothems: tuple[float, ...]
    shape: str


def _foot(t, a, b):
    d = b - a
    return a + np.dot(t - a, d) / np.dot(d, d) * d


def face_composition(p: Polyhedron, i: int, tol: float = 1e-9) -> FaceComposition:
    """Half-angles at the tangent point of face ``i``, in loop order.

    ``shape`` is 'rhombus', 'trapezoid' or 'other' for quadrilaterals by the
    pattern of equal half-angles.
    """
    if p.tangent_points is None:
        raise GeometryDomainError("polyhedron carries no tangent points")
    t = np.asarray(p.tangent_points[i], float)
    pts = p.face_points(i)
    m = len(pts)
    alphas, apothems = [], []
    for k in range(m):
        a, prev, nxt = pts[k], pts[k - 1], pts[(k + 1) % m]
        f1 = _foot(t, prev, a)
        f2 = _foot(t, a, nxt)
        apothems.append(float(np.linalg.norm(f2 - t)))
        u, w = a - t, f1 - t
        alphas.append(math.atan2(float(np.linalg.norm(np.cross(u, w))), float(u @ w)))
    shape = "other"
    if m == 4:
        x = alphas
        if abs(x[0] - x[2]) <= tol and abs(x[1] - x[3]) <= tol and abs(x[0] - x[1]) > tol:
            shape = "rhombus"
        elif any(abs(x[k] - x[(k + 1) % 4]) <= tol and abs(x[(k + 2) % 4] - x[(k + 3) % 4]) <= tol
                 and abs(x[k] - x[(k + 2) % 4]) > tol for k in range(4)):
            shape = "trapezoid"
    return FaceComposition(tuple(alphas), tuple(apothems), shape)


@dataclass
class RingReport:
    vertices: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_tight_rings(p: Polyhedron, tol: float = 1e-10) -> RingReport:
    """At every vertex the incident tangent planes meet and the corner angles agree."""
    p.check_closed()
    if p.tangent_points is None:
        raise GeometryDomainError("polyhedron carries no tangent points")
    rep = RingReport(len(p.vertices))
    for v in range(len(p.vertices)):
        fs = p.vertex_faces(v)
        x = p.vertices[v]
        off = max(abs(float(n @ x) - d) for n, d in (p.face_plane(f) for f in fs))
        if off > tol:
            rep.failures.append((v, "off tangent plane", off))
            continue
        angles = [p.plane_angle(f, v) for f in fs]
        spread = max(angles) - min(angles)
        if spread > tol:
            rep.failures.append((v, "unequal corner angles", spread))
    return rep


def circumscribed_density(p: Polyhedron) -> float:
    """Unit-sphere volume over block volume for a convex block around the origin."""
    p.check_closed()
    if not p.is_convex():
        raise GeometryDomainError(f"{p.name or 'polyhedron'} is not convex")
    for i, d in enumerate(p.face_distances()):
        if d < 1.0 - 1e-12:
            raise GeometryDomainError(
                f"face {i} plane is at distance {d!r} < 1; the unit sphere is not contained")
    return SPHERE_VOLUME / p.volume()


def regular_dodecahedron() -> Polyhedron:
    """Regular dodecahedron with inradius 1 (face normals along icosahedron vertices)."""
    g = (1 + math.sqrt(5)) / 2
    dirs = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            dirs += [(0, s1, s2 * g), (s1, s2 * g, 0), (s2 * g, 0, s1)]
    return Polyhedron.from_tangent_planes(dirs, 1.0, "regular dodecahedron")


def cube(half_width: float = 1.0) -> Polyhedron:
    dirs = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    return Polyhedron.from_tangent_planes(dirs, half_width, "cube")


# --- space filling ------------------------------------------------------------

STACKINGS = {"rhombic": "ABC", "trapezo-rhombic": "AB", "mixed": "ABAC"}


def block_shape(p: Polyhedron) -> str:
    shapes = [face_composition(p, i).shape for i in range(len(p.faces))]
    if shapes.count("rhombus") == 12:
        return "rhombic"
    if shapes.count("rhombus") == 6 and shapes.count("trapezoid") == 6:
        return "trapezo-rhombic"
    return "other"


@dataclass
class SpaceFillingReport:
    kind: str
    extent: int
    blocks: int
    region_volume: float
    blocks_volume: float
    samples: int
    uncovered: int
    multiply_covered: int
    boundary: int
    block_shapes: dict

    @property
    def volume_error(self) -> float:
        return abs(self.blocks_volume - self.region_volume)

    @property
    def ok(self) -> bool:
        return self.volume_error <= 1e-9 and self.uncovered == 0 and self.multiply_covered == 0


def verify_space_filling(kind: str = "rhombic", extent: int = 3, samples: int = 1 << 17,
                         tol: float = 1e-9) -> SpaceFillingReport:
    """Tile a periodic region with tight dodecahedra and audit the coverage.

    Each sphere of the stacking for ``kind`` gets the block cut by the tangent
    planes towards its own twelve contacts.  Block volumes are summed against
    the region volume, and unscrambled Halton points are counted against the
    block half-spaces: a point strictly inside two blocks is an overlap, a
    point inside none is a gap, and points on shared faces are boundary hits
    credited to the lowest block index.
    """
    if kind not in STACKINGS:
        raise GeometryDomainError(f"unknown block kind {kind!r}; use one of {sorted(STACKINGS)}")
    if extent < 2:
        raise GeometryDomainError("extent must be at least 2")
    region = barlow.generate_packing(STACKINGS[kind] * extent, extent, extent)
    cons = barlow.contacts(region)
    normals, blocks, shapes = [], [], {}
    for i, c in enumerate(region.centers):
        dirs = np.array([region.position(j, s) - c for j, s in cons[i]]) / 2.0
        if len(dirs) != 12:
            raise GeometryDomainError(f"sphere {i} has {len(dirs)} contacts, expected 12")
        blk = tight_dodecahedron(dirs)
        blocks.append(blk)
        normals.append(dirs)
        sh = block_shape(blk)
        shapes[sh] = shapes.get(sh, 0) + 1
    normals = np.array(normals)
    blocks_volume = math.fsum(b.volume() for b in blocks)
    radius = max(b.circumradius() for b in blocks)

    shifts = np.array([(a, b, c) for a in (-1, 0, 1) for b in (-1, 0, 1) for c in (-1, 0, 1)])
    img = (region.centers[None, :, :] + (shifts @ region.periods)[:, None, :]).reshape(-1, 3)
    owner = np.tile(np.arange(region.count), len(shifts))
    tree = cKDTree(img)

    pts = qmc.Halton(d=3, scramble=False).random(samples + 1)[1:] @ region.periods
    k = 16
    dist, idx = tree.query(pts, k=k, distance_upper_bound=radius + tol)
    if np.isfinite(dist[:, -1]).any():
        raise GeometryDomainError("neighbour query truncated; raise k")
    valid = np.isfinite(dist)
    idx = np.where(valid, idx, 0)
    rel = pts[:, None, :] - img[idx]                      # (P, k, 3)
    own = owner[idx]                                      # (P, k)
    s = np.einsum("pkfj,pkj->pkf", normals[own], rel).max(axis=2)
    inside = valid & (s <= 1.0 + tol)
    strict = valid & (s < 1.0 - tol)
    n_in = inside.sum(axis=1)
    n_strict = strict.sum(axis=1)
    return SpaceFillingReport(
        kind, extent, region.count, region.cell_volume, blocks_volume, samples,
        int((n_in == 0).sum()), int((n_strict >= 2).sum()),
        int(((n_in >= 2) & (n_strict == 0)).sum()), shapes)

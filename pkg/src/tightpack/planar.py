"""Circumscribed polygons, the regular-tiling equation and the 2-D Kepler block."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import GeometryDomainError

ANGLE_SUM_TOL = 1e-12


@dataclass(frozen=True)
class AngleComposition2D:
    """Half-angles at each vertex of a polygon circumscribing a circle.

    ``alphas[i]`` is the angle at the circle centre between vertex ``i`` and
    either adjacent tangent point, so the ``alphas`` sum to pi.
    """

    alphas: tuple[float, ...]
    r: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        a = self.alphas
        if len(a) < 3:
            raise GeometryDomainError(f"need at least 3 sides, got {len(a)}")
        if not (math.isfinite(self.r) and self.r > 0):
            raise GeometryDomainError(f"radius {self.r!r} must be positive")
        for i, x in enumerate(a):
            if not 0.0 < x < math.pi / 2:
                raise GeometryDomainError(f"alpha[{i}]={x!r} not in (0, pi/2)")
        if abs(math.fsum(a) - math.pi) > ANGLE_SUM_TOL:
            raise GeometryDomainError(f"half-angles sum to {math.fsum(a)!r}, not pi")

    @property
    def n(self) -> int:
        return len(self.alphas)


def circumscribed_area_perimeter(c: AngleComposition2D) -> tuple[float, float]:
    """Area ``r^2 sum tan(alpha_i)`` and perimeter ``2 S / r``."""
    s = c.r**2 * math.fsum(math.tan(a) for a in c.alphas)
    return s, 2 * s / c.r


def regular_polygon_extremes(n: int, r: float = 1.0) -> tuple[float, float]:
    """Area and perimeter of the regular n-gon circumscribing a circle of radius r."""
    if int(n) != n or n < 3:
        raise GeometryDomainError(f"n={n!r} must be an integer >= 3")
    if not r > 0:
        raise GeometryDomainError(f"radius {r!r} must be positive")
    t = math.tan(math.pi / n)
    return n * r * r * t, 2 * n * r * t


class MonotoneReport(NamedTuple):
    ok: bool
    checked: int
    first_violation: int | None


def verify_monotone_extremes(n_max: int, r: float = 1.0) -> MonotoneReport:
    """Check S0(n+1) < S0(n) and L0(n+1) < L0(n) for 3 <= n < n_max."""
    if n_max < 4:
        raise GeometryDomainError("n_max must be at least 4")
    prev = regular_polygon_extremes(3, r)
    for n in range(3, n_max):
        cur = regular_polygon_extremes(n + 1, r)
        if not (cur[0] < prev[0] and cur[1] < prev[1]):
            return MonotoneReport(False, n - 3, n)
        prev = cur
    return MonotoneReport(True, n_max - 3, None)


class TilingSolution(NamedTuple):
    n: int
    k: int


def tiling_solutions(n_max: int = 360) -> list[TilingSolution]:
    """All integer (n, k), n, k >= 3, with k regular n-gons filling 360 degrees.

    k = 2n / (n - 2) decreases in n and drops below 3 for n > 6, so the
    default search range is more than enough.
    """
    out = []
    for n in range(3, n_max + 1):
        if (2 * n) % (n - 2) == 0:
            k = 2 * n // (n - 2)
            if k >= 3:
                assert k * (n - 2) * 180 == 360 * n
                out.append(TilingSolution(n, k))
    return out


def honeycomb_block() -> tuple[float, float]:
    """Side and perimeter of the regular hexagon of unit area."""
    side = math.sqrt(2 / (3 * math.sqrt(3)))
    return side, 6 * side


def unit_area_perimeter(n: int) -> float:
    """Perimeter of the regular n-gon of unit area."""
    s0, l0 = regular_polygon_extremes(n, 1.0)
    return l0 / math.sqrt(s0)


class Kepler2D(NamedTuple):
    density: float
    min_block_area: float
    cut_area: float


def kepler2d_density() -> Kepler2D:
    """Local density of the side-2 equilateral triangle with unit discs at its corners.

    Each corner cuts a 60 degree sector, so the three sectors together are
    half a disc.
    """
    side = 2.0
    area = math.sqrt(3) / 4 * side**2
    corner = math.pi / 3
    cut = 3 * 0.5 * corner * 1.0**2
    return Kepler2D(cut / area, area, cut)


def random_compositions(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform draws from the simplex sum(alpha) = pi restricted to alpha < pi/2.

    Flat Dirichlet draws scaled by pi, with rejection of any row that has an
    angle at or above pi/2.
    """
    rows = []
    have = 0
    while have < count:
        d = rng.dirichlet(np.ones(n), size=max(2 * (count - have), 16)) * math.pi
        d = d[(d < math.pi / 2).all(axis=1) & (d > 0).all(axis=1)]
        # restore the exact sum lost to scaling
        d[:, -1] = math.pi - d[:, :-1].sum(axis=1)
        d = d[(d[:, -1] > 0) & (d[:, -1] < math.pi / 2)]
        rows.append(d)
        have += len(d)
    return np.concatenate(rows)[:count]


@dataclass
class MinimalityReport:
    n: int
    trials: int
    violations: int = 0
    worst_margin: float = math.inf
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violations == 0


def verify_regular_minimality(n: int, trials: int, seed: int = 0, r: float = 1.0,
                              tol: float = 1e-12) -> MinimalityReport:
    """Random compositions never beat the regular polygon's area."""
    s0, _ = regular_polygon_extremes(n, r)
    rng = np.random.default_rng(seed)
    comps = random_compositions(n, trials, rng)
    report = MinimalityReport(n, trials)
    for row in comps:
        s, _ = circumscribed_area_perimeter(AngleComposition2D(tuple(row), r))
        margin = s - s0
        report.worst_margin = min(report.worst_margin, margin)
        if margin < -tol:
            report.violations += 1
            if len(report.counterexamples) < 5:
                report.counterexamples.append(tuple(row))
    return report


def perturbation_check(n: int, trials: int, scale: float = 1e-3, seed: int = 0) -> MinimalityReport:
    """Small moves along the constraint plane from the regular point raise the area."""
    s0, _ = regular_polygon_extremes(n)
    rng = np.random.default_rng(seed)
    report = MinimalityReport(n, trials)
    base = np.full(n, math.pi / n)
    for _ in range(trials):
        d = rng.standard_normal(n)
        d -= d.mean()
        d *= scale / np.linalg.norm(d)
        comp = base + d
        comp[-1] = math.pi - comp[:-1].sum()
        s, _ = circumscribed_area_perimeter(AngleComposition2D(tuple(comp)))
        margin = s - s0
        report.worst_margin = min(report.worst_margin, margin)
        if margin <= 0:
            report.violations += 1
    return report

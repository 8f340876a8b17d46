"""Tight polygonal pyramids: metrics, the regular table and the 13-sphere budget.

A tight pyramid has its apex at the centre O of a unit sphere and its base
plane tangent to that sphere at H, with every base edge at distance
``APOTHEM = 1/sqrt(3)`` from H.  Its shape is fixed by the half-angles
``alpha_i`` at H, one per base vertex, summing to pi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import GeometryDomainError
from .geometry import _lhuilier

APOTHEM = 1 / math.sqrt(3)
ANGLE_SUM_TOL = 1e-12
FOUR_PI = 4 * math.pi

# Values as printed in the source table, kept as strings to preserve precision.
PYRAMID_TABLE = {
    3: {"omega": "1.194812833", "tau": "0.3982709444", "eta": "0.6898255109",
        "four_pi_over_omega": "10.51743860"},
    4: {"omega": "1.010721021", "tau": "0.3369070068", "eta": "0.7580407654",
        "four_pi_over_omega": "12.43307536"},
    5: {"omega": "0.9425295571", "tau": "0.3141765190", "eta": "0.7783683853",
        "four_pi_over_omega": "13.33260110"},
}
PYRAMID_VOLUMES = {
    3: ("sqrt(3)/3", math.sqrt(3) / 3),
    4: ("4/9", 4 / 9),
    5: ("5 tan(36 deg)/9", 5 * math.tan(math.radians(36)) / 9),
}


@dataclass(frozen=True)
class TightPyramid:
    alphas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        a = self.alphas
        if len(a) < 3:
            raise GeometryDomainError(f"need at least 3 edges, got {len(a)}")
        for i, x in enumerate(a):
            if not 0.0 < x < math.pi / 2:
                raise GeometryDomainError(f"alpha[{i}]={x!r} not in (0, pi/2)")
        if abs(math.fsum(a) - math.pi) > ANGLE_SUM_TOL:
            raise GeometryDomainError(f"half-angles sum to {math.fsum(a)!r}, not pi")

    @property
    def n(self) -> int:
        return len(self.alphas)

    @property
    def apothem(self) -> float:
        return APOTHEM

    def base_vertices(self, start: float = 0.0) -> np.ndarray:
        """Base polygon in the plane z = 1, tangent point H at (0, 0, 1).

        Vertex i lies at angle ``start + 2*(alpha_0 + ... + alpha_{i-1}) + alpha_i``
        from the x axis, at distance ``APOTHEM / cos(alpha_i)`` from H.
        """
        out = []
        phi = start
        for a in self.alphas:
            d = APOTHEM / math.cos(a)
            out.append((d * math.cos(phi + a), d * math.sin(phi + a), 1.0))
            phi += 2 * a
        return np.array(out)


class PyramidMetrics(NamedTuple):
    omega: float
    tau: float
    volume: float
    eta: float


def wedge_solid_angle(alpha: float, h: float = APOTHEM) -> float:
    """Solid angle of the right-angled corner O-H-H_i-A_i with angle alpha at H."""
    return _lhuilier(math.atan(h),
                     math.atan(h / math.cos(alpha)),
                     math.atan(h * math.tan(alpha) / math.sqrt(1 + h * h)))


def base_area(alphas: Sequence[float]) -> float:
    return math.fsum(math.tan(a) for a in alphas) * APOTHEM**2


def tight_pyramid_metrics(p: TightPyramid | Sequence[float]) -> PyramidMetrics:
    """Solid angle, cut sphere volume, pyramid volume and their ratio.

    The pyramid is cut at H into ``2n`` right-angled corners, two per base
    vertex, each handled by the L'Huilier kernel.
    """
    if not isinstance(p, TightPyramid):
        p = TightPyramid(tuple(p))
    # sort so the result is bitwise independent of vertex order
    alphas = sorted(p.alphas)
    omega = 2 * math.fsum(wedge_solid_angle(a) for a in alphas)
    volume = base_area(alphas) / 3
    tau = omega / 3
    return PyramidMetrics(omega, tau, volume, tau / volume)


def regular_tight_pyramid(n: int) -> PyramidMetrics:
    if int(n) != n or n < 3:
        raise GeometryDomainError(f"n={n!r} must be an integer >= 3")
    return tight_pyramid_metrics(TightPyramid((math.pi / n,) * n))


@dataclass
class ExtremalReport:
    n: int
    trials: int
    counterexamples: list = field(default_factory=list)
    regular: PyramidMetrics | None = None

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def _random_perturbed(n: int, rng: np.random.Generator, max_scale: float) -> np.ndarray:
    base = np.full(n, math.pi / n)
    while True:
        d = rng.standard_normal(n)
        d -= d.mean()
        d *= rng.uniform(0, max_scale) / np.linalg.norm(d)
        comp = base + d
        comp[-1] = math.pi - comp[:-1].sum()
        if (comp > 0).all() and (comp < math.pi / 2).all() and np.linalg.norm(d) > 0:
            return comp


def regularity_is_extremal(n: int, trials: int, seed: int = 0,
                           max_scale: float = 1.0) -> ExtremalReport:
    """Random valid compositions never beat the regular pyramid.

    Each trial moves the regular composition by a random step of length up to
    ``max_scale`` inside the constraint plane and rejects invalid results.
    """
    if n not in (3, 4, 5, 6):
        raise GeometryDomainError(f"n={n!r} must be one of 3, 4, 5, 6")
    if trials < 1:
        raise GeometryDomainError("trials must be positive")
    reg = regular_tight_pyramid(n)
    rng = np.random.default_rng(seed)
    report = ExtremalReport(n, trials, regular=reg)
    for _ in range(trials):
        comp = _random_perturbed(n, rng, max_scale)
        m = tight_pyramid_metrics(TightPyramid(tuple(comp)))
        if not (m.omega > reg.omega and m.tau > reg.tau
                and m.volume > reg.volume and m.eta < reg.eta):
            report.counterexamples.append((tuple(comp), m))
    return report


class BudgetResult(NamedTuple):
    parity_ok: bool
    min_total_omega: float
    exceeds_4pi: bool

    @property
    def margin(self) -> float:
        return self.min_total_omega - FOUR_PI


def thirteen_spheres_budget(face_sizes: Sequence[int]) -> BudgetResult:
    """Lower bound on the solid angle used by one contact pyramid per face.

    Each face of the contact polyhedron carries a pyramid whose solid angle is
    at least that of the regular tight pyramid with the same edge count.
    ``parity_ok`` is the handshake condition: the face sizes must sum to an
    even number (twice the edge count).
    """
    sizes = list(face_sizes)
    if not sizes:
        raise GeometryDomainError("face list is empty")
    for s in sizes:
        if s not in (3, 4, 5):
            raise GeometryDomainError(f"face size {s!r} not in {{3, 4, 5}}")
    table = {n: regular_tight_pyramid(n).omega for n in set(sizes)}
    total = math.fsum(table[s] for s in sizes)
    return BudgetResult(sum(sizes) % 2 == 0, total, total > FOUR_PI)


def max_tight_pyramids(n: int) -> int:
    """How many regular tight n-gonal pyramids fit around one sphere by solid angle."""
    if n not in (3, 4, 5):
        raise GeometryDomainError(f"n={n!r} must be one of 3, 4, 5")
    return math.floor(FOUR_PI / regular_tight_pyramid(n).omega)

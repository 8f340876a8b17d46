"""Solid-angle kernels, vector helpers and the two pyramid profile functions.

Angles are in radians and lengths in units of the unit-sphere radius.  A
spherical sector of solid angle ``omega`` cut from the unit sphere has volume
``omega / 3``; the profile functions report both.

Two independent routes compute the solid angle of a trihedral cone:

* :func:`triangle_solid_angle` works from the three arc angles between the
  edge rays (L'Huilier's quarter-angle formula).
* :func:`solid_angle_from_rays` works from the rays themselves
  (Van Oosterom-Strackee triple-product formula).

:func:`monte_carlo_solid_angle` is a third, statistical, route used only for
cross-checking.
"""
from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from .errors import GeometryDomainError

# Quarter-angle products above -CLAMP are rounding noise at degenerate triangles.
CLAMP = 1e-14
# Triple products below this (on unit rays) mark coplanar rays.
COPLANAR_EPS = 1e-14


def as_vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise GeometryDomainError(f"expected a 3-vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise GeometryDomainError(f"non-finite coordinates {a}")
    return a


def unit(v) -> np.ndarray:
    a = as_vec3(v)
    n = np.linalg.norm(a)
    if n == 0.0:
        raise GeometryDomainError("zero vector cannot be used as a ray")
    return a / n


def arc_angle(u, v) -> float:
    """Angle between two rays, stable near 0 and pi."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return math.atan2(float(np.linalg.norm(np.cross(u, v))), float(np.dot(u, v)))


class SphericalTriangleAngles(NamedTuple):
    """Arc angles at the sphere centre between the three rays of a corner."""

    alpha: float
    beta: float
    phi: float

    @property
    def quarter_sums(self) -> tuple[float, float, float, float]:
        a, b, f = self
        return ((a + b + f) / 4, (a + b - f) / 4, (a - b + f) / 4, (-a + b + f) / 4)

    def validate(self) -> None:
        a, b, f = self
        names = ("alpha", "beta", "phi")
        for name, x in zip(names, self):
            if not math.isfinite(x) or not 0.0 < x < math.pi:
                raise GeometryDomainError(f"{name}={x!r} is not in (0, pi)")
        if not a < b + f:
            raise GeometryDomainError("triangle inequality violated: alpha < beta + phi")
        if not b < a + f:
            raise GeometryDomainError("triangle inequality violated: beta < alpha + phi")
        if not f < a + b:
            raise GeometryDomainError("triangle inequality violated: phi < alpha + beta")
        if not a + b + f < 2 * math.pi:
            raise GeometryDomainError("perimeter bound violated: alpha + beta + phi < 2 pi")


def _lhuilier(a: float, b: float, f: float) -> float:
    p, p1, p2, p3 = (a + b + f) / 4, (a + b - f) / 4, (a - b + f) / 4, (-a + b + f) / 4
    prod = math.tan(p) * math.tan(p1) * math.tan(p2) * math.tan(p3)
    if prod < 0.0:
        if prod < -CLAMP:
            raise GeometryDomainError(f"negative quarter-angle product {prod!r}")
        prod = 0.0
    return 4.0 * math.atan(math.sqrt(prod))


def triangle_solid_angle(angles) -> float:
    """Solid angle of the spherical triangle with the given arc angles.

    ``angles`` is a :class:`SphericalTriangleAngles` or any 3-sequence
    ``(alpha, beta, phi)``.  Returns ``4 atan(sqrt(tan p tan p1 tan p2 tan p3))``.
    """
    t = SphericalTriangleAngles(*map(float, angles))
    t.validate()
    return _lhuilier(*t)


class RaySolidAngle(NamedTuple):
    omega: float
    degenerate: bool


def solid_angle_from_rays(u, v, w) -> RaySolidAngle:
    """Solid angle of the trihedral cone spanned by three rays.

    Coplanar rays give ``RaySolidAngle(0.0, True)``.
    """
    a, b, c = unit(u), unit(v), unit(w)
    triple = float(np.dot(a, np.cross(b, c)))
    if abs(triple) <= COPLANAR_EPS:
        return RaySolidAngle(0.0, True)
    denom = 1.0 + float(np.dot(a, b) + np.dot(b, c) + np.dot(c, a))
    return RaySolidAngle(2.0 * math.atan2(abs(triple), denom), False)


def arc_angles_from_rays(u, v, w) -> SphericalTriangleAngles:
    a, b, c = unit(u), unit(v), unit(w)
    return SphericalTriangleAngles(arc_angle(a, b), arc_angle(b, c), arc_angle(c, a))


class MonteCarloEstimate(NamedTuple):
    omega: float
    stderr: float
    hits: int
    samples: int


def monte_carlo_solid_angle(u, v, w, samples: int = 10**7, seed: int = 0,
                            chunk: int = 1 << 20) -> MonteCarloEstimate:
    """Estimate a trihedral solid angle by uniform direction sampling.

    Isotropic Gaussian vectors are used unnormalised: cone membership only
    depends on direction.  Identical ``seed`` and ``samples`` give identical
    results.
    """
    a, b, c = unit(u), unit(v), unit(w)
    normals = np.array([np.cross(b, c), np.cross(c, a), np.cross(a, b)])
    if np.dot(a, normals[0]) < 0:
        normals = -normals
    rng = np.random.default_rng(seed)
    hits = 0
    left = int(samples)
    while left > 0:
        m = min(left, chunk)
        d = rng.standard_normal((m, 3))
        s = d @ normals.T
        hits += int(np.count_nonzero((s >= 0).all(axis=1)))
        left -= m
    frac = hits / samples
    return MonteCarloEstimate(4 * math.pi * frac,
                              4 * math.pi * math.sqrt(frac * (1 - frac) / samples),
                              hits, int(samples))


def newell_normal(loop) -> np.ndarray:
    """Area-weighted normal of a (possibly non-planar) closed loop."""
    pts = np.asarray(loop, dtype=float)
    return 0.5 * np.cross(pts, np.roll(pts, -1, axis=0)).sum(axis=0)


def polygon_cone_solid_angle(apex, base_loop: Sequence, root: int = 0) -> float:
    """Solid angle at ``apex`` of the cone over a convex base loop.

    The cone is split into a fan of trihedral cones rooted at ``base_loop[root]``
    and the L'Huilier kernel is summed over the fan.
    """
    o = as_vec3(apex)
    pts = np.array([as_vec3(p) for p in base_loop])
    n = len(pts)
    if n < 3:
        raise GeometryDomainError(f"base loop needs at least 3 vertices, got {n}")
    rays = pts - o
    if np.any(np.linalg.norm(rays, axis=1) == 0.0):
        raise GeometryDomainError("apex coincides with a base vertex")
    normal = newell_normal(pts)
    nn = np.linalg.norm(normal)
    if nn == 0.0:
        raise GeometryDomainError("base loop has zero area")
    height = abs(float(np.dot(pts.mean(axis=0) - o, normal / nn)))
    if height <= 1e-12 * max(1.0, float(np.abs(rays).max())):
        raise GeometryDomainError("apex lies on the base plane")
    rays = rays / np.linalg.norm(rays, axis=1)[:, None]
    rays = np.roll(rays, -root, axis=0)
    total = 0.0
    r0 = rays[0]
    for i in range(1, n - 1):
        a = arc_angle(r0, rays[i])
        b = arc_angle(rays[i], rays[i + 1])
        c = arc_angle(rays[i + 1], r0)
        total += _lhuilier(a, b, c)
    return total


class RightCornerProfile(NamedTuple):
    sector_volume: float
    pyramid_volume: float
    eta: float


def right_corner_profile(theta: float, x: float) -> RightCornerProfile:
    """Sphere-sector vs. pyramid volume for the right-angled corner OABH.

    ``OH = 1`` is the altitude, ``HB = x`` with ``HB`` perpendicular to ``AB``,
    and ``theta`` is the angle AHB.  ``eta`` decreases in ``x``.
    """
    if not (math.isfinite(theta) and 0.0 < theta < math.pi / 2):
        raise GeometryDomainError(f"theta={theta!r} not in (0, pi/2)")
    if not (math.isfinite(x) and x > 0.0):
        raise GeometryDomainError(f"x={x!r} must be positive")
    alpha = math.atan(x)
    beta = math.atan(x / math.cos(theta))
    phi = math.atan(x * math.tan(theta) / math.sqrt(1 + x * x))
    vs = _lhuilier(alpha, beta, phi) / 3
    vp = x * x * math.tan(theta) / 6
    return RightCornerProfile(vs, vp, vs / vp)


class SplitCornerProfile(NamedTuple):
    omega: float
    sector_volume: float
    pyramid_volume: float
    eta: float


def split_corner_profile(theta: float, h: float, x: float) -> SplitCornerProfile:
    """Profiles of the corner OABH split by the foot C of the altitude HC.

    ``h = HC`` is fixed, ``x`` is the angle AHC and ``theta - x`` the angle
    BHC.  All four outputs are symmetric about ``x = theta / 2``.
    """
    if not (math.isfinite(theta) and 0.0 < theta < math.pi):
        raise GeometryDomainError(f"theta={theta!r} not in (0, pi)")
    if not (math.isfinite(h) and h > 0.0):
        raise GeometryDomainError(f"h={h!r} must be positive")
    if not (math.isfinite(x) and 0.0 < x < theta):
        raise GeometryDomainError(f"x={x!r} not in (0, theta)")
    if x >= math.pi / 2 or theta - x >= math.pi / 2:
        # A or B would sit at infinity on the line through C.
        raise GeometryDomainError("x and theta - x must both be below pi/2")
    cx, cy = math.cos(x), math.cos(theta - x)
    alpha = math.atan(h / cx)
    beta = math.atan(h / cy)
    phi = math.atan2(h * math.sqrt(1 + h * h) * math.sin(theta),
                     h * h * math.cos(theta) + cx * cy)
    omega = _lhuilier(alpha, beta, phi)
    vp = h * h * (math.tan(x) + math.tan(theta - x)) / 6
    return SplitCornerProfile(omega, omega / 3, vp, omega / 3 / vp)

"""
Three ways to measure a solid angle
===================================

The same spherical triangle through the side-length formula, the
triple-product formula on its edge rays, and a seeded Monte Carlo count.
"""
import math

import numpy as np

from tightpack import geometry as g

rng = np.random.default_rng(1)
rays = rng.normal(size=(3, 3))
rays /= np.linalg.norm(rays, axis=1)[:, None]

# side-length route: arcs between the rays
arcs = [g.arc_angle(rays[i], rays[(i + 1) % 3]) for i in range(3)]
print("side lengths  ", g._lhuilier(*arcs))

# ray route
print("triple product", g.solid_angle_from_rays(*rays).omega)

# Monte Carlo with a standard error
mc = g.monte_carlo_solid_angle(*rays, samples=1_000_000, seed=42)
print("monte carlo   ", mc)

# an octant is an eighth of the sphere
print("octant error  ", g.solid_angle_from_rays(*np.eye(3)).omega - 4 * math.pi / 8)

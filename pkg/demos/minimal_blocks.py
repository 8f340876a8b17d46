"""
Minimal blocks with unit spheres at their corners
=================================================
"""
import math

import numpy as np

from tightpack import minimal_blocks as mb

# the flexible tetrahedron is smallest at both ends of its range
xs = np.linspace(1, math.sqrt(2), 5)
print([round(float(mb.tetra_volume_profile(x)), 6) for x in xs])

for kind in mb.KINDS:
    b = mb.minimal_block(kind)
    acc = mb.vertex_sphere_density(b)
    print(f"{kind:8s} V = {b.volume():.6f}  density = {acc.density:.6f}")

# cutting a hexahedron into two prisms keeps the density at pi/sqrt(18)
p, q = mb.split_prism("hexa_A")
print(mb.vertex_sphere_density(p).density, math.pi / math.sqrt(18))

rep = mb.verify_constraint_activity("tetra_B")
print("active pairs:", len(rep.active))
print(mb.minimality_spot_check("hexa_A", 2000, seed=0))

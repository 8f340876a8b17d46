"""
Circumscribed polygons and the honeycomb
========================================
"""
import math

from tightpack import planar

# regular tilings of the plane: n-gons, k at a vertex
print([(s.n, s.k) for s in planar.tiling_solutions()])

# among circumscribed hexagons the regular one has the least area
rep = planar.verify_regular_minimality(6, trials=10_000, seed=0)
print(rep)

# the cell of the honeycomb and the disc packing density
print("hexagon block (area, perimeter):", planar.honeycomb_block())
k = planar.kepler2d_density()
print("disc density", k.density, "vs pi/sqrt(12) =", math.pi / math.sqrt(12))

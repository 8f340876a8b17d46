"""
Tight pyramids and the thirteen-spheres budget
==============================================
"""
import math

from tightpack import pyramids as py

for n in (3, 4, 5):
    m = py.regular_tight_pyramid(n)
    print(n, m, "fits", py.max_tight_pyramids(n), "around a sphere")

# eleven pentagons, one square and one triangle overshoot the sphere by a hair
b = py.thirteen_spheres_budget([5] * 11 + [4, 3])
print("margin over 4 pi:", b.margin)

# thirteen pentagons cannot close: 65 edge ends is odd
print("parity of 13 pentagons ok?", py.thirteen_spheres_budget([5] * 13).parity_ok)

# ten pentagons and three squares stay under 4 pi, so the budget alone decides nothing
print(py.thirteen_spheres_budget([5] * 10 + [4] * 3).min_total_omega < 4 * math.pi)

"""
Dodecahedral blocks of the close packings
=========================================

Faces of area sqrt(2) whose pyramids each take pi/3 of the sphere.
"""
import math

from tightpack import kepler_blocks as kb

f3 = kb.solve_family_three()
print("family (a, pi/2-a, pi/2-a, a): tan a =", math.tan(f3.alpha))

f2 = kb.solve_family_two()
print("family (a, a, pi-3a, a):", f2)
# family two has the smaller face, but its corners cannot meet around a vertex
print("area", kb.face_area(f3.composition.alphas), "vs",
      kb.face_area((math.radians(f2.alpha_deg),) * 3 + (math.radians(f2.alpha3_deg),)))

for p in (kb.build_rhombic_dodecahedron(), kb.build_trapezo_rhombic_dodecahedron()):
    print(kb.block_shape(p), "volume", p.volume(), "density", kb.circumscribed_density(p))
    print("  tight rings ok:", kb.verify_tight_rings(p).ok)

rep = kb.verify_space_filling("rhombic", extent=2, samples=1 << 14)
print("space filling:", rep.ok, rep.block_shapes)

kb.build_rhombic_dodecahedron().write_off("rhombic.off")

"""
Barlow stackings
================

Every cyclic sequence of A, B, C layers with no equal neighbours packs at
pi/sqrt(18), each sphere touching twelve.
"""
import math

from tightpack import barlow as bl

seqs = bl.cyclic_sequences(8)
print(len(seqs), "sequences up to length 8")

for s in ("ABC", "AB", "ABAC"):
    r = bl.generate_packing(s, 2, 2)
    print(s, bl.packing_density(r), set(bl.contact_graph(r).tolist()))

print("pi/sqrt(18) =", math.pi / math.sqrt(18))

# around a touching pair: 1 shared neighbour set of 4 and 7 further out
r = bl.generate_packing("AB", 2, 2)
j, shift = bl.contacts(r)[0][0]
print(bl.periphery_structure(r, 0, j, neighbor_shift=shift))

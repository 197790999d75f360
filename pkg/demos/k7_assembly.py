"""
Assembling a rainbow K7
=======================

Four rainbow K4s, all joined to a triangle star K^Delta(25, 49).  Star
edges that reuse a K4 color form at most 24 matchings; a triangle
survives their removal and one of the K4s avoids its colors.
"""

from collections import Counter

import numpy as np

from rainbowlab.constructions import (
    assemble_rainbow_k7,
    build_k7_instance,
    extract_rainbow_k5,
    random_k7_coloring,
    random_tilde_coloring,
)

inst = build_k7_instance(25, 49)
print(inst.graph)

rng = np.random.default_rng(0)
chosen = Counter()
for _ in range(20):
    col = random_k7_coloring(inst, rng)
    k7 = assemble_rainbow_k7(inst, col)
    chosen[inst.cliques.index(k7.vertex_map[:4])] += 1
print("clique used:", dict(chosen))

# the same idea one size down: a star on the big side of Khat(3,5) yields a K5
leaves = Counter(extract_rainbow_k5(c.host, c).vertex_map[-1] for c in (random_tilde_coloring(rng) for _ in range(500)))
print("leaf used:", dict(sorted(leaves.items())))

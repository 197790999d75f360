"""
A threshold sweep in the perturbed model
========================================

Seed K_{3,3}, add G(6, p), ask for a rainbow triangle.  A triangle needs
one same-side edge and there are six such pairs, so the curve should
follow 1 - (1 - p)^6.
"""

import numpy as np

from rainbowlab.graph import build
from rainbowlab.simulate import CompleteBipartiteHalf, sweep_csv, threshold_sweep

grid = np.round(np.linspace(0, 0.5, 11), 3)
recs = threshold_sweep(CompleteBipartiteHalf(6), build("K3"), grid, trials=2000, rng_seed=1)

for r in recs:
    exact = 1 - (1 - r.p) ** 6
    print(f"p={r.p:.2f}  est={r.estimate:.3f}  exact={exact:.3f}  ci=[{r.ci_low:.3f}, {r.ci_high:.3f}]")

print(sweep_csv(recs))

# C5 never shows up here: even K8 has a proper coloring with no rainbow C5
# (color uv by u xor v; five distinct nonzero vectors of Z_2^3 never sum to 0)
from rainbowlab.coloring import ProperColoring, rainbow_census

k8 = build("K8")
xor = ProperColoring(k8, {(u, v): u ^ v for u, v in k8.edge_list})
print("rainbow C5 under xor coloring:", rainbow_census(xor, build("C5")).rainbow_copies)

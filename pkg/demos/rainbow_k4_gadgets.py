"""
Which small gadgets force a rainbow K4?
=======================================

Every proper coloring of Khat(3,4) contains a rainbow K4, while joins of
two small forests admit a coloring with none.
"""

from rainbowlab.coloring import rainbow_census
from rainbowlab.constructions import SHAPES, appendix_b_coloring
from rainbowlab.graph import build
from rainbowlab.solver import decide_arrow

k4 = build("K4")

# exhaustive search, certified by the node count
for spec in ("Khat(3,4)", "Kjoin(S3,S4)"):
    v = decide_arrow(build(spec), k4)
    print(spec, v.status.value, f"{v.stats.nodes} nodes")

# the search finds its own witness for each join...
v = decide_arrow(build("Kjoin(P4,P4)"), k4)
print("Kjoin(P4,P4)", v.status.value, rainbow_census(v.witness, k4).rainbow_copies, "rainbow K4")

# ...and the tabulated block colorings agree
for left in SHAPES:
    for right in SHAPES:
        col = appendix_b_coloring(left, right)
        rep = rainbow_census(col, k4)
        print(f"{left:>3} x {right:<3} {rep.total_copies:3d} K4s, {rep.rainbow_copies} rainbow, {col.num_colors} colors")

"""Explicit colorings and the deterministic extraction steps behind the
rainbow K4, K5, K7 and odd-cycle results.

Every procedure re-checks its output (properness, zero rainbow census, or
rainbowness of the returned copy) before handing it back.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .coloring import ProperColoring, check_proper, is_rainbow
from .errors import GadgetStateError, InapplicableError, ParameterError, StructureError
from .graph import (
    Complete,
    Edge,
    GadgetSpec,
    Graph,
    Join,
    Path,
    Star,
    SubgraphCopy,
    TildeK35,
    TriangleStar,
    build,
    norm_edge,
    triangle_star_apex,
)

# ---------------------------------------------------------------------------
# component shapes and the K4-free block colorings
# ---------------------------------------------------------------------------

SHAPES = ("K2", "P3", "P4", "K13")
_ALIASES = {"K2": "K2", "P2": "K2", "P3": "P3", "P4": "P4", "K13": "K13", "S3": "K13", "K1,3": "K13"}
_SHAPE_SPECS: dict[str, GadgetSpec] = {"K2": Complete(2), "P3": Path(3), "P4": Path(4), "K13": Star(3)}

# Local labels: paths run 0-1-2(-3); the star has center 0 and leaves 1, 2, 3.
INTERNAL_COLORS: dict[str, dict[Edge, int]] = {
    "K2": {(0, 1): 1},
    "P3": {(0, 1): 1, (1, 2): 2},
    "P4": {(0, 1): 1, (1, 2): 2, (2, 3): 3},
    "K13": {(0, 1): 1, (0, 2): 2, (0, 3): 3},
}

# Cross-edge color classes (left local, right local) for the three base cases.
_TABLES: dict[tuple[str, str], dict[int, list[tuple[int, int]]]] = {
    ("K13", "K13"): {
        4: [(1, 2), (0, 0), (2, 3), (3, 1)],
        5: [(0, 2), (3, 0)],
        6: [(1, 0), (0, 3)],
        7: [(2, 0), (0, 1)],
    },
    ("K13", "P4"): {
        4: [(0, 0), (2, 1)],
        5: [(0, 3), (2, 2)],
        6: [(1, 2), (0, 1), (3, 0)],
        7: [(1, 3), (0, 2), (3, 1)],
    },
    ("P4", "P4"): {
        4: [(0, 2), (1, 3), (2, 0), (3, 1)],
        5: [(0, 1), (1, 2), (2, 3)],
        6: [(1, 0), (2, 1), (3, 2)],
    },
}
FIRST_FRESH_COLOR = 8


def shape_name(shape: str) -> str:
    try:
        return _ALIASES[shape.replace(" ", "")]
    except KeyError:
        raise ParameterError(f"shape must be one of {', '.join(SHAPES)}, got {shape!r}") from None


def shape_size(shape: str) -> int:
    return _SHAPE_SPECS[shape_name(shape)].build().n


def _carrier(shape: str) -> str:
    # K2 and P3 sit inside P4 as a prefix, with matching internal colors
    return "K13" if shape == "K13" else "P4"


def _cross_table(left: str, right: str) -> dict[tuple[int, int], int]:
    a, b = _carrier(left), _carrier(right)
    if (a, b) in _TABLES:
        classes = _TABLES[(a, b)]
        flat = {pair: c for c, pairs in classes.items() for pair in pairs}
    else:
        classes = _TABLES[(b, a)]
        flat = {(y, x): c for c, pairs in classes.items() for x, y in pairs}
    nl, nr = shape_size(left), shape_size(right)
    return {(x, y): c for (x, y), c in flat.items() if x < nl and y < nr}


def appendix_b_coloring(left: str, right: str) -> ProperColoring:
    """Proper coloring of ``K_{L,R}`` with no rainbow K4.

    Internal edges carry the fixed colors 1..3, tabulated cross classes use
    4..7 and every other cross edge gets its own color from 8 upwards.
    Vertices follow the join labeling: left shape first, then right.
    """
    left, right = shape_name(left), shape_name(right)
    g = Join(_SHAPE_SPECS[left], _SHAPE_SPECS[right]).build()
    nl = shape_size(left)
    table = _cross_table(left, right)
    assignment: dict[Edge, int] = {}
    for (u, v), c in INTERNAL_COLORS[left].items():
        assignment[(u, v)] = c
    for (u, v), c in INTERNAL_COLORS[right].items():
        assignment[(u + nl, v + nl)] = c
    fresh = FIRST_FRESH_COLOR
    for u, v in g.edge_list:
        if u < nl <= v:
            c = table.get((u, v - nl))
            if c is None:
                c, fresh = fresh, fresh + 1
            assignment[(u, v)] = c
    return check_proper(g, assignment)


# ---------------------------------------------------------------------------
# zero-statement coloring of a bipartite seed plus sparse components
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Component:
    """A component of the sparse part; ``vertices`` follow the shape's local labels."""

    shape: str
    vertices: tuple[int, ...]

    def __post_init__(self):
        name = shape_name(self.shape)
        object.__setattr__(self, "shape", name)
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))
        if len(self.vertices) != shape_size(name):
            raise StructureError(f"{name} needs {shape_size(name)} vertices, got {len(self.vertices)}")
        if len(set(self.vertices)) != len(self.vertices):
            raise StructureError(f"repeated vertex in {name} component {self.vertices}")

    def edges(self) -> dict[Edge, int]:
        """Edges in host labels with their fixed internal colors."""
        vs = self.vertices
        return {norm_edge(vs[a], vs[b]): c for (a, b), c in INTERNAL_COLORS[self.shape].items()}


@dataclass(frozen=True)
class ComponentStructure:
    left_components: tuple[Component, ...] = ()
    right_components: tuple[Component, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "left_components", tuple(self.left_components))
        object.__setattr__(self, "right_components", tuple(self.right_components))
        seen: set[int] = set()
        for comp in self.left_components + self.right_components:
            if seen & set(comp.vertices):
                raise StructureError(f"components overlap at {sorted(seen & set(comp.vertices))}")
            seen.update(comp.vertices)

    def edges(self) -> dict[Edge, int]:
        out: dict[Edge, int] = {}
        for comp in self.left_components + self.right_components:
            out.update(comp.edges())
        return out

    def validate(self, sides: Sequence[int]) -> None:
        for side, comps in ((0, self.left_components), (1, self.right_components)):
            for comp in comps:
                for v in comp.vertices:
                    if not 0 <= v < len(sides) or sides[v] != side:
                        raise StructureError(f"vertex {v} of {comp.shape} is not on side {side}")


@dataclass(frozen=True)
class PaletteAllocator:
    """Disjoint color blocks ``A_ij`` above the reserved colors, in (i, j) order."""

    sizes: tuple[tuple[int, ...], ...]
    reserved: tuple[int, ...] = (1, 2, 3)
    blocks: dict[tuple[int, int], range] = field(init=False)
    fresh_start: int = field(init=False)

    def __post_init__(self):
        blocks = {}
        nxt = max(self.reserved) + 1
        for i, row in enumerate(self.sizes):
            for j, size in enumerate(row):
                blocks[(i, j)] = range(nxt, nxt + size)
                nxt += size
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "fresh_start", nxt)

    @classmethod
    def for_structure(cls, structure: ComponentStructure) -> "PaletteAllocator":
        return cls(tuple(tuple(len(l.vertices) * len(r.vertices) for r in structure.right_components)
                         for l in structure.left_components))

    def check(self) -> None:
        used: set[int] = set()
        for (i, j), block in self.blocks.items():
            if set(block) & set(self.reserved) or set(block) & used:
                raise StructureError(f"block {(i, j)} overlaps reserved colors or another block")
            if len(block) != self.sizes[i][j]:
                raise StructureError(f"block {(i, j)} has the wrong size")
            used.update(block)


def _require_complete_bipartite(seed: Graph) -> None:
    if seed.sides is None:
        raise StructureError("seed must carry side labels")
    left = [v for v in seed.vertices() if seed.sides[v] == 0]
    right = [v for v in seed.vertices() if seed.sides[v] == 1]
    if seed.m != len(left) * len(right) or any(seed.sides[u] == seed.sides[v] for u, v in seed.edges):
        raise StructureError("seed is not complete bipartite across its sides")


def zero_statement_coloring(seed: Graph, random_part: ComponentStructure) -> ProperColoring:
    """Coloring of ``seed`` plus the component edges with no rainbow K4.

    Each left/right component pair receives a relabeled block coloring on its
    own palette ``A_ij``; all other seed edges get fresh unique colors.
    """
    _require_complete_bipartite(seed)
    random_part.validate(seed.sides)
    internal = random_part.edges()
    union = Graph(seed.n, seed.edges | frozenset(internal), seed.sides, seed.name)
    assignment: dict[Edge, int] = dict(internal)
    palette = PaletteAllocator.for_structure(random_part)
    for i, lc in enumerate(random_part.left_components):
        for j, rc in enumerate(random_part.right_components):
            block = appendix_b_coloring(lc.shape, rc.shape)
            local = lc.vertices + rc.vertices
            colors = iter(palette.blocks[(i, j)])
            rename: dict[int, int] = {}
            for u, v in block.host.edge_list:
                if u < len(lc.vertices) <= v:
                    c = block.assignment[(u, v)]
                    if c not in rename:
                        rename[c] = next(colors)
                    assignment[norm_edge(local[u], local[v])] = rename[c]
    fresh = palette.fresh_start
    for e in union.edge_list:
        if e not in assignment:
            assignment[e] = fresh
            fresh += 1
    return check_proper(union, assignment)


def _classify(g: Graph, comp: list[int]) -> Component:
    sub = [e for e in g.edge_list if e[0] in comp]
    deg = {v: g.degree(v) for v in comp}
    if len(sub) == 1:
        return Component("K2", tuple(sorted(comp)))
    ends = sorted(v for v in comp if deg[v] == 1)
    if len(sub) == 3 and max(deg.values()) == 3:
        center = next(v for v in comp if deg[v] == 3)
        return Component("K13", (center, *sorted(set(comp) - {center})))
    if len(sub) == len(comp) - 1 and len(comp) in (3, 4) and len(ends) == 2:
        order = [ends[0]]
        while len(order) < len(comp):
            order.append(next(w for w in g.adj[order[-1]] if w not in order))
        return Component("P3" if len(comp) == 3 else "P4", tuple(order))
    raise StructureError(f"component on {sorted(comp)} is not one of {', '.join(SHAPES)}")


def structure_from_graph(seed: Graph, perturbed: Graph) -> ComponentStructure:
    """Read the component structure off the same-side edges of ``perturbed``."""
    _require_complete_bipartite(seed)
    if perturbed.n != seed.n:
        raise StructureError("perturbed graph must live on the seed's vertex set")
    sides = seed.sides
    inner = Graph(seed.n, frozenset(e for e in perturbed.edges if sides[e[0]] == sides[e[1]]))
    seen: set[int] = set()
    out: tuple[list[Component], list[Component]] = ([], [])
    for v in inner.vertices():
        if v in seen or not inner.adj[v]:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for w in inner.adj[x]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        out[sides[v]].append(_classify(inner, comp))
    return ComponentStructure(tuple(out[0]), tuple(out[1]))


def balanced_seed(n: int) -> Graph:
    """``K_{floor(n/2), ceil(n/2)}`` with the small side on ``0..n//2-1``."""
    a = n // 2
    return build(f"Kb({a},{n - a})") if a else Graph(n, frozenset(), tuple([1] * n))


def random_component_structure(n: int, rng: np.random.Generator, fill: float = 0.8) -> ComponentStructure:
    """Random vertex-disjoint components on both sides of ``balanced_seed(n)``."""
    a = n // 2
    sides = (list(range(a)), list(range(a, n)))
    out: tuple[list[Component], list[Component]] = ([], [])
    for s in (0, 1):
        pool = [int(v) for v in rng.permutation(sides[s])]
        while pool and rng.random() < fill:
            shape = SHAPES[int(rng.integers(len(SHAPES)))]
            size = shape_size(shape)
            if size > len(pool):
                break
            verts, pool = pool[:size], pool[size:]
            out[s].append(Component(shape, tuple(verts)))
    return ComponentStructure(tuple(out[0]), tuple(out[1]))


# ---------------------------------------------------------------------------
# K5 from a rainbow Khat(3,5) with a star on its large side
# ---------------------------------------------------------------------------

TILDE_X = (0, 1, 2)
TILDE_CENTER = 3
TILDE_LEAVES = (4, 5, 6, 7)


def _edge_color(coloring: ProperColoring, u: int, v: int) -> int:
    try:
        return coloring.assignment[norm_edge(u, v)]
    except KeyError:
        raise GadgetStateError("edges", f"edge {norm_edge(u, v)} is not colored") from None


def extract_rainbow_k5(gadget: Graph, coloring: ProperColoring,
                       embedding: Sequence[int] | None = None) -> SubgraphCopy:
    """Rainbow K5 on the three clique vertices, the star center and one leaf.

    ``embedding`` maps the canonical Ktilde35 labels (clique 0..2, star
    center 3, leaves 4..7) into the coloring's host; identity by default.
    """
    emb = tuple(embedding) if embedding is not None else tuple(range(8))
    if len(emb) != 8 or len(set(emb)) != 8:
        raise ParameterError("embedding must map the 8 gadget vertices injectively")
    template = TildeK35().build()
    for u, v in template.edges:
        if not gadget.has_edge(emb[u], emb[v]):
            raise GadgetStateError("gadget", f"missing edge {norm_edge(emb[u], emb[v])}")
    hat = [e for e in template.edge_list if not (e[0] == TILDE_CENTER and e[1] in TILDE_LEAVES)]
    hat_colors = [_edge_color(coloring, emb[u], emb[v]) for u, v in hat]
    if len(set(hat_colors)) != len(hat_colors):
        raise GadgetStateError("hat-rainbow", "the Khat(3,5) part is not rainbow")
    x = [emb[i] for i in TILDE_X]
    tri = {_edge_color(coloring, a, b) for a, b in combinations(x, 2)}
    y1 = emb[TILDE_CENTER]
    for leaf in TILDE_LEAVES:
        yt = emb[leaf]
        if _edge_color(coloring, y1, yt) not in tri:
            break
    else:
        raise GadgetStateError("leaf", "every star edge repeats a triangle color")
    copy = SubgraphCopy.from_map(Complete(5).build(), (*x, y1, yt))
    if not is_rainbow(coloring, copy):
        raise GadgetStateError("verify", "extracted K5 is not rainbow")
    return copy


def random_tilde_coloring(rng: np.random.Generator, palette: int = 30) -> ProperColoring:
    """Proper coloring of Ktilde35 whose Khat(3,5) part is rainbow.

    Star edges are drawn preferentially from the triangle colors and other
    reused colors, so the leaf selection actually has to skip."""
    g = TildeK35().build()
    star = [(TILDE_CENTER, leaf) for leaf in TILDE_LEAVES]
    hat = [e for e in g.edge_list if e not in star]
    colors = [int(c) for c in rng.choice(palette, size=len(hat), replace=False)]
    assignment = dict(zip(hat, colors))
    at: dict[int, set[int]] = defaultdict(set)
    for (u, v), c in assignment.items():
        at[u].add(c)
        at[v].add(c)
    tri = [assignment[e] for e in combinations(TILDE_X, 2)]
    fresh = palette
    for idx in rng.permutation(len(star)):
        u, v = star[idx]
        pool = tri + colors if rng.random() < 0.7 else tri
        free = [c for c in pool if c not in at[u] and c not in at[v]]
        if free:
            c = free[int(rng.integers(len(free)))]
        else:
            c, fresh = fresh, fresh + 1
        assignment[(u, v)] = c
        at[u].add(c)
        at[v].add(c)
    return check_proper(g, assignment)


# ---------------------------------------------------------------------------
# greedy sets of interest / compatibility
# ---------------------------------------------------------------------------


def greedy_interest_set(gadget: Graph, coloring: ProperColoring,
                        triangle: Sequence[int] = (0, 1, 2),
                        candidates: Iterable[int] | None = None) -> tuple[int, ...]:
    """Vertices of ``N`` any five of which span a rainbow Khat(3,5) with ``triangle``.

    ``N`` defaults to the common neighborhood of the triangle.  Candidates
    are scanned in index order; a vertex whose three star colors meet the
    triangle colors is dropped, and otherwise it is admitted iff its star
    colors avoid those of every admitted vertex.  Each admitted vertex
    blocks at most six others, hence at least ``(|N| - 3) / 7`` survive.
    """
    x = tuple(triangle)
    if len(x) != 3 or any(not gadget.has_edge(a, b) for a, b in combinations(x, 2)):
        raise GadgetStateError("triangle", f"{x} is not a triangle of the gadget")
    tri = [_edge_color(coloring, a, b) for a, b in combinations(x, 2)]
    if len(set(tri)) != 3:
        raise GadgetStateError("triangle", "triangle is not rainbow")
    if candidates is None:
        pool = sorted(set.intersection(*(set(gadget.adj[a]) for a in x)) - set(x))
    else:
        pool = sorted(set(candidates))
    tri_set = set(tri)
    admitted: list[int] = []
    taken: set[int] = set()
    for u in pool:
        if any(not gadget.has_edge(a, u) for a in x):
            raise GadgetStateError("candidates", f"vertex {u} is not joined to the triangle")
        star = {_edge_color(coloring, a, u) for a in x}
        if star & tri_set or star & taken:
            continue
        admitted.append(u)
        taken |= star
    return tuple(admitted)


# Exclusion constants for four rainbow K4s (16 vertices, at most 24 colors).
# Interest: for each of the 16 anchor vertices x, each of the 21 clique colors
# not already at x sits on at most one edge ux.  Compatibility: each of u's 16
# cross colors reappears at most once at each of the 15 other anchors.
COMPAT_C0 = 16 * 21
COMPAT_C1 = 16 * 15 + 1


@dataclass(frozen=True)
class CompatibleSet:
    k_psi: tuple[tuple[int, ...], ...]
    interest: tuple[int, ...]
    members: tuple[int, ...]
    interest_exclusions: int
    compat_exclusions: int

    def bound(self, n_candidates: int) -> float:
        return (n_candidates - COMPAT_C0) / COMPAT_C1


def find_rainbow_k4(g: Graph, coloring: ProperColoring, block: Iterable[int]) -> tuple[int, ...] | None:
    """First rainbow K4 (in lexicographic vertex order) inside ``block``."""
    for quad in combinations(sorted(block), 4):
        pairs = list(combinations(quad, 2))
        if all(g.has_edge(a, b) for a, b in pairs):
            if len({coloring.assignment[norm_edge(a, b)] for a, b in pairs}) == 6:
                return quad
    return None


def _cross_colors(coloring: ProperColoring, u: int, anchors: Sequence[int]) -> list[int]:
    return [_edge_color(coloring, u, x) for x in anchors]


def greedy_compatible_set(gadget: Graph, coloring: ProperColoring, blocks: Sequence[Iterable[int]],
                          candidates: Iterable[int] | None = None) -> CompatibleSet:
    """Pairwise compatible vertices of interest with respect to four rainbow K4s.

    One rainbow K4 is located in each block.  A candidate is of interest when
    none of its edges to the K4s repeats a K4 color.  Two vertices are taken
    as compatible when their cross-edge color sets are disjoint, which is
    what the K7 assembly needs; under a proper coloring the pointwise version
    (different colors towards each single anchor) always holds.
    """
    blocks = [tuple(b) for b in blocks]
    if len(blocks) != 4:
        raise GadgetStateError("k-psi", f"need four blocks, got {len(blocks)}")
    k_psi = []
    for b in blocks:
        quad = find_rainbow_k4(gadget, coloring, b)
        if quad is None:
            raise GadgetStateError("k-psi", f"no rainbow K4 inside block {b}")
        k_psi.append(quad)
    anchors = [x for quad in k_psi for x in quad]
    used = set(anchors)
    k_colors = {coloring.assignment[norm_edge(a, b)] for quad in k_psi for a, b in combinations(quad, 2)}
    if candidates is None:
        pool = sorted(v for v in gadget.vertices()
                      if v not in set().union(*blocks) and all(gadget.has_edge(v, x) for x in anchors))
    else:
        pool = sorted(set(candidates) - used)
    interest = []
    for u in pool:
        if set(_cross_colors(coloring, u, anchors)).isdisjoint(k_colors):
            interest.append(u)
    members: list[int] = []
    taken: set[int] = set()
    for u in interest:
        cols = set(_cross_colors(coloring, u, anchors))
        if cols & taken:
            continue
        members.append(u)
        taken |= cols
    return CompatibleSet(tuple(k_psi), tuple(interest), tuple(members),
                         len(pool) - len(interest), len(interest) - len(members))


# ---------------------------------------------------------------------------
# triangle stars and the K7 assembly
# ---------------------------------------------------------------------------


def _triangle_star_params(gadget: TriangleStar | Graph | str) -> tuple[int, int]:
    if isinstance(gadget, str):
        from .graph import parse_spec
        gadget = parse_spec(gadget)
    if isinstance(gadget, TriangleStar):
        return gadget.k, gadget.t
    raise ParameterError("gadget must be given as a TriangleStar spec")


_TRIANGLE = Complete(3).build()


@lru_cache(maxsize=8)
def _triangle_star_graph(k: int, t: int) -> Graph:
    return TriangleStar(k, t).build()


def matching_removal_triangle(gadget: TriangleStar | str, matchings: Sequence[Iterable[Sequence[int]]]) -> SubgraphCopy:
    """A triangle of the triangle star surviving deletion of the matchings.

    With ``k >= m + 1`` some skeleton edge survives, and each matching meets
    at most two of its ``t >= 2m + 1`` triangles, so one stays intact.  The
    scan takes skeleton edges and then apexes in index order.  Outside that
    range the scan still runs and :class:`InapplicableError` is raised only
    if no triangle survives.
    """
    k, t = _triangle_star_params(gadget)
    g = _triangle_star_graph(k, t)
    removed: set[Edge] = set()
    for idx, mt in enumerate(matchings):
        touched: set[int] = set()
        for e in mt:
            u, v = norm_edge(*e)
            if not g.has_edge(u, v):
                raise ParameterError(f"matching {idx}: {(u, v)} is not an edge of the gadget")
            if u in touched or v in touched:
                raise ParameterError(f"matching {idx} is not a matching at vertex {u if u in touched else v}")
            touched.update((u, v))
            removed.add((u, v))
    tri = _TRIANGLE
    for i in range(k):
        leaf = i + 1
        if (0, leaf) in removed:
            continue
        for j in range(t):
            apex = triangle_star_apex(k, t, i, j)
            if (0, apex) not in removed and norm_edge(leaf, apex) not in removed:
                return SubgraphCopy.from_map(tri, (0, leaf, apex))
    raise InapplicableError(
        f"no triangle survives {len(matchings)} matchings (guarantee needs k >= m+1, t >= 2m+1)")


def random_maximal_matching(g: Graph, rng: np.random.Generator) -> list[Edge]:
    edges = g.edge_list
    busy: set[int] = set()
    out = []
    for idx in rng.permutation(len(edges)):
        u, v = edges[idx]
        if u not in busy and v not in busy:
            busy.update((u, v))
            out.append((u, v))
    return out


@dataclass(frozen=True)
class K7Instance:
    """Four disjoint K4s on ``0..15`` and a triangle star on the vertices
    after them, with every edge between the two parts present."""

    graph: Graph
    cliques: tuple[tuple[int, ...], ...]
    star_offset: int
    k: int
    t: int

    def star_vertex(self, local: int) -> int:
        return self.star_offset + local


def build_k7_instance(k: int = 25, t: int = 49) -> K7Instance:
    cliques = tuple(tuple(range(4 * i, 4 * i + 4)) for i in range(4))
    off = 16
    star = TriangleStar(k, t).build()
    edges = [e for q in cliques for e in combinations(q, 2)]
    edges += [(u + off, v + off) for u, v in star.edge_list]
    edges += [(x, off + s) for x in range(off) for s in range(star.n)]
    g = Graph.from_edges(off + star.n, edges, name=f"K7Instance({k},{t})")
    return K7Instance(g, cliques, off, k, t)


def assemble_rainbow_k7(instance: K7Instance, coloring: ProperColoring) -> SubgraphCopy:
    """Rainbow K7 on one of the four K4s plus a surviving triangle of the star.

    Preconditions are checked in order and reported by stage: ``k-psi``
    (each K4 rainbow), ``interest``, ``compatibility``, ``matching-removal``
    and ``clash-selection``.
    """
    g, off = instance.graph, instance.star_offset
    anchors = [x for q in instance.cliques for x in q]
    k_colors: set[int] = set()
    for q in instance.cliques:
        cols = [_edge_color(coloring, a, b) for a, b in combinations(q, 2)]
        if len(set(cols)) != 6:
            raise GadgetStateError("k-psi", f"K4 on {q} is not rainbow")
        k_colors.update(cols)
    star_n = g.n - off
    owner: dict[int, int] = {}
    for s in range(star_n):
        cols = _cross_colors(coloring, off + s, anchors)
        if k_colors.intersection(cols):
            raise GadgetStateError("interest", f"vertex {off + s} repeats a K4 color")
        for c in cols:
            if owner.setdefault(c, s) != s:
                raise GadgetStateError("compatibility", f"vertices {off + owner[c]} and {off + s} share color {c}")
    by_color: dict[int, list[Edge]] = defaultdict(list)
    for u, v in TriangleStar(instance.k, instance.t).build().edge_list:
        c = _edge_color(coloring, u + off, v + off)
        if c in k_colors:
            by_color[c].append((u, v))
    try:
        tri = matching_removal_triangle(TriangleStar(instance.k, instance.t), list(by_color.values()))
    except InapplicableError as exc:
        raise GadgetStateError("matching-removal", str(exc)) from None
    t_verts = [off + v for v in tri.vertex_map]
    t_colors = {_edge_color(coloring, a, b) for a, b in combinations(t_verts, 2)}
    for q in instance.cliques:
        if t_colors.isdisjoint(_edge_color(coloring, x, y) for x in q for y in t_verts):
            copy = SubgraphCopy.from_map(Complete(7).build(), (*q, *t_verts))
            if not is_rainbow(coloring, copy):
                raise GadgetStateError("verify", "assembled K7 is not rainbow")
            return copy
    raise GadgetStateError("clash-selection", "every K4 clashes with the triangle")


def random_k7_coloring(instance: K7Instance, rng: np.random.Generator, reuse: float = 0.6) -> ProperColoring:
    """Random proper coloring meeting the assembly's preconditions.

    The K4s are rainbow over a shared small palette, each star vertex owns
    16 private cross colors, and star edges reuse K4 colors and other
    vertices' cross colors as often as properness allows, so both the
    pruning and the clash selection are exercised.
    """
    g, off = instance.graph, instance.star_offset
    assignment: dict[Edge, int] = {}
    at: list[set[int]] = [set() for _ in range(g.n)]

    def put(u: int, v: int, c: int) -> None:
        assignment[norm_edge(u, v)] = c
        at[u].add(c)
        at[v].add(c)

    k_palette = list(range(1, 13))
    for q in instance.cliques:
        cols = rng.choice(k_palette, size=6, replace=False)
        for (a, b), c in zip(combinations(q, 2), cols):
            put(a, b, int(c))
    star_n = g.n - off
    base = 100
    for s in range(star_n):
        perm = rng.permutation(16)
        for x in range(16):
            put(x, off + s, base + 16 * s + int(perm[x]))
    fresh = base + 16 * star_n
    star = TriangleStar(instance.k, instance.t).build()
    for idx in rng.permutation(star.m):
        u, v = star.edge_list[idx]
        # the third vertex of a triangle on uv is where a clash would bite
        third = sorted(star.adj[u] & star.adj[v])
        u, v = u + off, v + off
        c = None
        if rng.random() < reuse:
            pool = list(k_palette)
            for _ in range(4):
                w = third[int(rng.integers(len(third)))] if third and rng.random() < 0.5 else int(rng.integers(star_n))
                pool.append(base + 16 * w + int(rng.integers(16)))
            free = [c for c in pool if c not in at[u] and c not in at[v]]
            if free:
                c = free[int(rng.integers(len(free)))]
        if c is None:
            c, fresh = fresh, fresh + 1
        put(u, v, c)
    return ProperColoring(g, assignment)


# ---------------------------------------------------------------------------
# odd cycles through a same-side edge
# ---------------------------------------------------------------------------


def greedy_rainbow_odd_cycle(perturbed: Graph, cross_edge: Sequence[int], coloring: ProperColoring,
                             ell: int) -> SubgraphCopy | None:
    """A rainbow ``C_{2 ell + 1}`` through ``cross_edge``, or None if the greedy walk fails.

    The walk leaves ``y`` and alternates sides, taking the lowest-index
    unvisited neighbor whose edge brings a new color.  The last inner vertex
    must also close back to ``x`` with another new color, and the step before
    it only accepts vertices from which such a closing vertex exists.
    """
    if ell < 1:
        raise ParameterError("ell must be at least 1")
    x, y = int(cross_edge[0]), int(cross_edge[1])
    if not perturbed.has_edge(x, y):
        raise ParameterError(f"{norm_edge(x, y)} is not an edge")
    sides = perturbed.sides
    if sides is not None and sides[x] != sides[y]:
        raise ParameterError("cross edge must lie inside one side")
    length = 2 * ell + 1
    col = lambda a, b: coloring.assignment[norm_edge(a, b)]
    home = sides[x] if sides is not None else None

    def want_side(step: int) -> int | None:
        # path vertex number step (y is 0); odd positions sit opposite x
        if home is None:
            return None
        return 1 - home if step % 2 == 1 else home

    def ok_side(v: int, step: int) -> bool:
        s = want_side(step)
        return s is None or sides[v] == s

    def closers(path: list[int], used: set[int]) -> list[int]:
        last = path[-1]
        out = []
        for w in sorted(perturbed.adj[last]):
            if w in path or w == x or not ok_side(w, len(path)) or not perturbed.has_edge(w, x):
                continue
            a, b = col(last, w), col(w, x)
            if a != b and a not in used and b not in used:
                out.append(w)
        return out

    path = [y]
    used = {col(x, y)}
    if ell == 1:
        ws = closers(path, used)
        if not ws:
            return None
        cyc = [x, y, ws[0]]
    else:
        while len(path) < length - 2:
            last = path[-1]
            step = len(path)
            nxt = None
            for w in sorted(perturbed.adj[last]):
                if w in path or w == x or not ok_side(w, step):
                    continue
                c = col(last, w)
                if c in used:
                    continue
                if step == length - 3 and not closers(path + [w], used | {c}):
                    continue
                nxt = w
                break
            if nxt is None:
                return None
            used.add(col(last, nxt))
            path.append(nxt)
        ws = closers(path, used)
        if not ws:
            return None
        cyc = [x, *path, ws[0]]
    copy = SubgraphCopy.from_map(build(f"C{length}"), cyc)
    if not is_rainbow(coloring, copy):
        raise GadgetStateError("verify", "greedy cycle is not rainbow")
    return copy

"""Proper edge colorings, rainbow detection and counting, and the exact
non-rainbow / clash counting bounds for sparse bipartite gadgets."""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BoundViolationError,
    DomainError,
    GadgetStateError,
    InapplicableError,
    ParameterError,
    TotalityError,
)
from .errors import PropernessError
from .graph import (
    CompleteBipartite,
    Edge,
    Graph,
    SubgraphCopy,
    enumerate_copies,
    injective_homomorphisms,
    norm_edge,
)

WITNESS_CAP = 16


@dataclass(frozen=True, eq=False)
class ProperColoring:
    """A proper coloring of ``host``.

    ``assignment`` keeps the color ids it was built with (the explicit tables
    address specific colors).  :meth:`canonical` renames colors by first use
    along the host's canonical edge order, and equality compares the
    canonical forms, so two colorings are equal iff they induce the same
    partition of the edges into matchings.
    """

    host: Graph
    assignment: Mapping[Edge, int]

    def color(self, u: int, v: int | None = None) -> int:
        e = norm_edge(*u) if v is None else norm_edge(u, v)
        return self.assignment[e]

    def colors_of(self, edges: Iterable[Edge]) -> list[int]:
        return [self.assignment[e] for e in edges]

    @cached_property
    def classes(self) -> tuple[frozenset[Edge], ...]:
        """The color classes, ordered by first use in canonical edge order."""
        groups: dict[int, list[Edge]] = {}
        for e in self.host.edge_list:
            groups.setdefault(self.assignment[e], []).append(e)
        return tuple(frozenset(es) for es in groups.values())

    @property
    def palette(self) -> frozenset[int]:
        return frozenset(self.assignment.values())

    @property
    def num_colors(self) -> int:
        return len(self.palette)

    def key(self) -> tuple[int, ...]:
        """Canonical color of each edge in canonical edge order."""
        rename: dict[int, int] = {}
        return tuple(rename.setdefault(self.assignment[e], len(rename)) for e in self.host.edge_list)

    def canonical(self) -> "ProperColoring":
        return ProperColoring(self.host, dict(zip(self.host.edge_list, self.key())))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProperColoring):
            return NotImplemented
        return self.host == other.host and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.host, self.key()))

    def restrict(self, sub: Graph) -> "ProperColoring":
        """Restriction to a subgraph on the same vertex labels."""
        missing = sub.edges - self.host.edges
        if missing:
            raise DomainError(f"edges {sorted(missing)[:3]} are not in the host")
        return ProperColoring(sub, {e: self.assignment[e] for e in sub.edge_list})


def check_proper(host: Graph, assignment: Mapping[Sequence[int], int]) -> ProperColoring:
    """Validate ``assignment`` as a total proper coloring of ``host``."""
    normed: dict[Edge, int] = {}
    for e, c in assignment.items():
        ne = norm_edge(*e)
        if ne not in host.edges:
            raise DomainError(f"edge {ne} is not in the host graph")
        normed[ne] = int(c)
    missing = [e for e in host.edge_list if e not in normed]
    if missing:
        raise TotalityError(f"{len(missing)} edges uncolored, first {missing[0]}")
    seen: set[tuple[int, int]] = set()
    for (u, v) in host.edge_list:
        c = normed[(u, v)]
        for x in (u, v):
            if (x, c) in seen:
                raise PropernessError(x, c)
            seen.add((x, c))
    return ProperColoring(host, {e: normed[e] for e in host.edge_list})


def random_proper_coloring(g: Graph, rng: np.random.Generator, palette: int | None = None) -> ProperColoring:
    """A random proper coloring: edges in random order, each taking a uniform
    color from ``range(palette)`` still free at both endpoints, or a fresh
    color when none is free.  Small palettes force heavy color reuse."""
    if palette is None:
        palette = max((g.degree(v) for v in g.vertices()), default=0) + 1
    used: list[set[int]] = [set() for _ in range(g.n)]
    out: dict[Edge, int] = {}
    fresh = palette
    edges = g.edge_list
    for idx in rng.permutation(len(edges)):
        u, v = edges[idx]
        free = [c for c in range(palette) if c not in used[u] and c not in used[v]]
        if free:
            c = free[int(rng.integers(len(free)))]
        else:
            c = fresh
            fresh += 1
        out[(u, v)] = c
        used[u].add(c)
        used[v].add(c)
    return ProperColoring(g, out)


def _check_copy(coloring: ProperColoring, copy: SubgraphCopy) -> None:
    if not copy.edges <= coloring.host.edges:
        raise DomainError("copy is not a subgraph of the coloring's host")


def is_rainbow(coloring: ProperColoring, copy: SubgraphCopy) -> bool:
    _check_copy(coloring, copy)
    cols = coloring.colors_of(copy.edges)
    return len(set(cols)) == len(cols)


def clash(coloring: ProperColoring, copy_a: SubgraphCopy, copy_b: SubgraphCopy) -> bool:
    """True iff the two copies see a common color."""
    _check_copy(coloring, copy_a)
    _check_copy(coloring, copy_b)
    return not set(coloring.colors_of(copy_a.edges)).isdisjoint(coloring.colors_of(copy_b.edges))


@dataclass(frozen=True)
class RainbowReport:
    total_copies: int
    rainbow_copies: int
    non_rainbow_copies: int
    witnesses: tuple[SubgraphCopy, ...] = field(default=(), compare=False)

    def as_lines(self) -> list[str]:
        lines = [
            f"total_copies={self.total_copies}",
            f"rainbow_copies={self.rainbow_copies}",
            f"non_rainbow_copies={self.non_rainbow_copies}",
        ]
        for w in self.witnesses:
            lines.append("rainbow_witness=" + ",".join(map(str, w.vertex_map)))
        return lines


def rainbow_census(coloring: ProperColoring, pattern: Graph, witness_cap: int = WITNESS_CAP) -> RainbowReport:
    """Count rainbow and non-rainbow copies of ``pattern`` by full enumeration."""
    total = rainbow = 0
    witnesses = []
    assign = coloring.assignment
    for cp in enumerate_copies(coloring.host, pattern):
        total += 1
        cols = {assign[e] for e in cp.edges}
        if len(cols) == len(cp.edges):
            rainbow += 1
            if len(witnesses) < witness_cap:
                witnesses.append(cp)
    return RainbowReport(total, rainbow, total - rainbow, tuple(witnesses))


def _independent_pairs(edges: Iterable[Edge]) -> list[tuple[Edge, Edge]]:
    return [(e, f) for e, f in combinations(sorted(edges), 2) if not set(e) & set(f)]


def extension_bound(g: Graph, pattern: Graph, labeled: bool = True) -> int:
    """``e(G) * n * max |{e,f} -> H|`` over independent edge pairs of ``g``.

    With ``labeled`` the extensions are injections pattern -> g whose edge
    image contains both fixed edges; otherwise unlabeled copies are counted.
    """
    if not _independent_pairs(pattern.edges):
        raise InapplicableError("pattern has no two independent edges")
    pairs = _independent_pairs(g.edges)
    if not pairs:
        raise InapplicableError("host has no two independent edges")
    counts: Counter[tuple[Edge, Edge]] = Counter()
    if labeled:
        images = (frozenset(norm_edge(phi[u], phi[v]) for u, v in pattern.edges)
                  for phi in injective_homomorphisms(g, pattern))
    else:
        images = (cp.edges for cp in enumerate_copies(g, pattern))
    for image in images:
        counts.update(_independent_pairs(image))
    return g.m * g.n * max(counts[p] for p in pairs)


@dataclass(frozen=True)
class BoundCheck:
    count: int
    bound: int

    @property
    def holds(self) -> bool:
        return self.count <= self.bound


def _bipartite_members(r: int, s: int, n: int) -> Iterable[list[Edge]]:
    for chosen in combinations(range(r, r + n), s):
        yield [(i, y) for i in range(r) for y in chosen]


def non_rainbow_bound(r: int, s: int, n: int) -> int:
    """``r n (r-1) C(n-2, s-2)``."""
    return r * n * (r - 1) * comb(n - 2, s - 2) if n >= 2 else 0


def count_non_rainbow_bipartite(r: int, s: int, n: int, coloring: ProperColoring) -> BoundCheck:
    """Non-rainbow ``K_{r,s}`` copies in a proper coloring of ``K_{r,n}`` whose
    size-``r`` class is the size-``r`` side (vertices ``0..r-1``)."""
    if s < 2 or r < 1 or n < r:
        raise ParameterError("need s >= 2 and n >= r >= 1")
    host = CompleteBipartite(r, n).build()
    if coloring.host.edges != host.edges:
        raise DomainError(f"coloring is not on K_{{{r},{n}}} with the canonical labeling")
    coloring = check_proper(host, coloring.assignment)
    assign = coloring.assignment
    count = 0
    for edges in _bipartite_members(r, s, n):
        if len({assign[e] for e in edges}) < len(edges):
            count += 1
    check = BoundCheck(count, non_rainbow_bound(r, s, n))
    if not check.holds:
        raise BoundViolationError(f"{count} non-rainbow copies exceed the bound {check.bound}")
    return check


def count_incompatible(r: int, s: int, n: int, coloring: ProperColoring) -> BoundCheck:
    """Members of the ``K_{r,s}`` family in ``HatK(r, n)`` not compatible with
    the clique ``K`` on ``0..r-1``: non-rainbow, or sharing a color with ``K``.

    Bound: ``r n (r-1) C(n-2, s-2) + e(K) C(n, s-1)``.
    """
    if s < 2 or r < 1 or n <= r:
        raise ParameterError("need s >= 2 and n > r >= 1")
    clique = [(i, j) for i, j in combinations(range(r), 2)]
    expected = set(clique) | {(i, y) for i in range(r) for y in range(r, r + n)}
    if coloring.host.edges != expected:
        raise DomainError(f"coloring is not on HatK({r},{n}) with the canonical labeling")
    assign = check_proper(coloring.host, coloring.assignment).assignment
    clique_colors = {assign[e] for e in clique}
    if len(clique_colors) != len(clique):
        raise GadgetStateError("clique", "the clique is not rainbow")
    count = 0
    for edges in _bipartite_members(r, s, n):
        cols = {assign[e] for e in edges}
        if len(cols) < len(edges) or cols & clique_colors:
            count += 1
    check = BoundCheck(count, non_rainbow_bound(r, s, n) + len(clique) * comb(n, s - 1))
    if not check.holds:
        raise BoundViolationError(f"{count} incompatible members exceed the bound {check.bound}")
    return check


def copies_through(g: Graph, pattern: Graph, anchor: int | Sequence[int]) -> int:
    """Number of copies of ``pattern`` containing a vertex or an edge of ``g``."""
    if isinstance(anchor, (int, np.integer)):
        if not 0 <= anchor < g.n:
            raise DomainError(f"vertex {anchor} not in graph")
        return sum(1 for cp in enumerate_copies(g, pattern) if anchor in cp.vertex_map)
    e = norm_edge(*anchor)
    if e not in g.edges:
        raise DomainError(f"edge {e} not in graph")
    return sum(1 for cp in enumerate_copies(g, pattern) if e in cp.edges)


# coloring files: one "u v c" line per edge


def format_coloring(coloring: ProperColoring) -> str:
    return "".join(f"{u} {v} {coloring.assignment[(u, v)]}\n" for u, v in coloring.host.edge_list)


def parse_coloring(host: Graph, text: str) -> ProperColoring:
    assignment = {}
    for ln in text.splitlines():
        parts = ln.split()
        if not parts:
            continue
        if len(parts) != 3:
            raise ParameterError(f"coloring line {ln!r} is not '<u> <v> <c>'")
        u, v, c = map(int, parts)
        assignment[(u, v)] = c
    return check_proper(host, assignment)


def write_coloring(coloring: ProperColoring, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        fh.write(format_coloring(coloring))


def read_coloring(host: Graph, path: str | os.PathLike) -> ProperColoring:
    with open(path) as fh:
        return parse_coloring(host, fh.read())

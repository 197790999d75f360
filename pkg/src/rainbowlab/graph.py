"""Graphs, the gadget families used throughout the package, and copy enumeration.

Vertices are the integers ``0..n-1`` and edges are stored as sorted pairs
``(u, v)`` with ``u < v``.  A :class:`Graph` never changes after it is built;
every derived graph (union, deletion, induced subgraph) is a new value.

Gadget labelings are fixed so that colorings elsewhere can name vertices:

=====================  ==========================================================
``Complete(r)``        ``0..r-1``
``Cycle(l)``           ``0..l-1`` around the cycle, edge ``i -- i+1 mod l``
``CompleteBipartite``  ``0..r-1`` on side 0, ``r..r+s-1`` on side 1
``Star(k)``            center ``0``, leaves ``1..k``
``Path(k)``            ``0 - 1 - ... - k-1``
``HatK(r, n)``         clique side ``0..r-1``, independent side ``r..r+n-1``
``TildeK35``           ``HatK(3, 5)`` plus the star centred at ``3`` (the lowest
                       vertex of the size-5 side) with leaves ``4..7``
``Join(L, R)``         ``L`` on ``0..v(L)-1``, ``R`` shifted by ``v(L)``
``TriangleStar(k, t)`` center ``0``, leaves ``1..k``; the apex of triangle ``j``
                       on skeleton edge ``{0, i+1}`` is ``1 + k + i*t + j``
=====================  ==========================================================
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import ParameterError, SpecSyntaxError

Edge = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class Graph:
    """A simple undirected graph on ``range(n)``.

    ``sides`` optionally tags every vertex with 0 or 1 (a bipartition label
    carried by perturbation seeds and bipartite gadgets).
    """

    n: int
    edges: frozenset[Edge]
    sides: tuple[int, ...] | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ParameterError("vertex count must be nonnegative")
        for u, v in self.edges:
            if u == v:
                raise ParameterError(f"loop at vertex {u}")
            if not (0 <= u < v < self.n):
                raise ParameterError(f"edge {(u, v)} is not a sorted pair inside [0, {self.n})")
        if self.sides is not None:
            if len(self.sides) != self.n or any(s not in (0, 1) for s in self.sides):
                raise ParameterError("sides must assign 0 or 1 to every vertex")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]],
                   sides: Sequence[int] | None = None, name: str = "") -> "Graph":
        normed = set()
        for u, v in edges:
            if u == v:
                raise ParameterError(f"loop at vertex {u}")
            normed.add(norm_edge(int(u), int(v)))
        return cls(n, frozenset(normed), tuple(sides) if sides is not None else None, name)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n, self.edges, self.sides) == (other.n, other.edges, other.sides)

    def __hash__(self) -> int:
        return hash((self.n, self.edges, self.sides))

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<Graph{label} n={self.n} m={self.m}>"

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_list(self) -> tuple[Edge, ...]:
        """Edges in canonical (ascending lexicographic) order."""
        return tuple(sorted(self.edges))

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edge_list)}

    @cached_property
    def adj(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def adj_mask(self) -> tuple[int, ...]:
        return tuple(sum(1 << w for w in nb) for nb in self.adj)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self.edges

    def vertices(self) -> range:
        return range(self.n)

    # derived graphs

    def without_edges(self, removed: Iterable[Sequence[int]]) -> "Graph":
        drop = {norm_edge(*e) for e in removed}
        return Graph(self.n, self.edges - drop, self.sides)

    def with_edges(self, added: Iterable[Sequence[int]]) -> "Graph":
        extra = {norm_edge(*e) for e in added}
        return Graph(self.n, self.edges | extra, self.sides)

    def union(self, other: "Graph") -> "Graph":
        """Edge union of two graphs on the same vertex set (keeps our sides)."""
        if other.n != self.n:
            raise ParameterError("union needs graphs on the same vertex set")
        return Graph(self.n, self.edges | other.edges, self.sides)

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph, relabelled to ``0..k-1`` in ascending vertex order."""
        vs = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(vs)}
        es = [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos]
        sides = None if self.sides is None else [self.sides[v] for v in vs]
        return Graph.from_edges(len(vs), es, sides)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in self.adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n


def relabel(g: Graph, mapping: Sequence[int], n: int | None = None) -> Graph:
    """Image of ``g`` under the vertex map ``i -> mapping[i]``."""
    size = n if n is not None else (max(mapping) + 1 if mapping else 0)
    return Graph.from_edges(size, ((mapping[u], mapping[v]) for u, v in g.edges))


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return Graph.from_edges(offset, edges)


# ---------------------------------------------------------------------------
# gadget specs
# ---------------------------------------------------------------------------


def _positive(**params: int) -> None:
    for key, val in params.items():
        if not isinstance(val, int) or val <= 0:
            raise ParameterError(f"{key} must be a positive integer, got {val!r}")


class GadgetSpec:
    """Base for the named graph families; ``build()`` realizes the canonical labeling."""

    def build(self) -> Graph:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.spec_string()

    def spec_string(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Complete(GadgetSpec):
    r: int

    def __post_init__(self):
        _positive(r=self.r)

    def build(self) -> Graph:
        return Graph.from_edges(self.r, combinations(range(self.r), 2), name=str(self))

    def spec_string(self) -> str:
        return f"K{self.r}"


@dataclass(frozen=True)
class Cycle(GadgetSpec):
    length: int

    def __post_init__(self):
        _positive(length=self.length)
        if self.length < 3:
            raise ParameterError("a cycle needs at least 3 vertices")

    def build(self) -> Graph:
        k = self.length
        return Graph.from_edges(k, ((i, (i + 1) % k) for i in range(k)), name=str(self))

    def spec_string(self) -> str:
        return f"C{self.length}"


@dataclass(frozen=True)
class CompleteBipartite(GadgetSpec):
    r: int
    s: int

    def __post_init__(self):
        _positive(r=self.r, s=self.s)

    def build(self) -> Graph:
        r, s = self.r, self.s
        edges = [(i, r + j) for i in range(r) for j in range(s)]
        return Graph.from_edges(r + s, edges, [0] * r + [1] * s, name=str(self))

    def spec_string(self) -> str:
        return f"Kb({self.r},{self.s})"


@dataclass(frozen=True)
class Star(GadgetSpec):
    k: int

    def __post_init__(self):
        _positive(k=self.k)

    def build(self) -> Graph:
        return Graph.from_edges(self.k + 1, ((0, i) for i in range(1, self.k + 1)), name=str(self))

    def spec_string(self) -> str:
        return f"S{self.k}"


@dataclass(frozen=True)
class Path(GadgetSpec):
    """Path on ``k`` vertices."""

    k: int

    def __post_init__(self):
        _positive(k=self.k)

    def build(self) -> Graph:
        return Graph.from_edges(self.k, ((i, i + 1) for i in range(self.k - 1)), name=str(self))

    def spec_string(self) -> str:
        return f"P{self.k}"


@dataclass(frozen=True)
class HatK(GadgetSpec):
    """``K_{r,n}`` with a clique on the size-``r`` side."""

    r: int
    n: int

    def __post_init__(self):
        _positive(r=self.r, n=self.n)
        if self.n <= self.r:
            raise ParameterError(f"HatK needs n > r, got r={self.r}, n={self.n}")

    def build(self) -> Graph:
        r, n = self.r, self.n
        edges = list(combinations(range(r), 2))
        edges += [(i, r + j) for i in range(r) for j in range(n)]
        return Graph.from_edges(r + n, edges, [0] * r + [1] * n, name=str(self))

    def spec_string(self) -> str:
        return f"Khat({self.r},{self.n})"


@dataclass(frozen=True)
class TildeK35(GadgetSpec):
    def build(self) -> Graph:
        base = HatK(3, 5).build()
        return Graph(base.n, base.edges | {(3, j) for j in range(4, 8)}, base.sides, "Ktilde35")

    def spec_string(self) -> str:
        return "Ktilde35"


@dataclass(frozen=True)
class Join(GadgetSpec):
    """Disjoint ``left`` and ``right`` plus every edge between them."""

    left: GadgetSpec
    right: GadgetSpec

    def build(self) -> Graph:
        lg, rg = self.left.build(), self.right.build()
        a = lg.n
        edges = list(lg.edges)
        edges += [(u + a, v + a) for u, v in rg.edges]
        edges += [(i, a + j) for i in range(a) for j in range(rg.n)]
        return Graph.from_edges(a + rg.n, edges, [0] * a + [1] * rg.n, name=str(self))

    def spec_string(self) -> str:
        return f"Kjoin({self.left},{self.right})"


@dataclass(frozen=True)
class TriangleStar(GadgetSpec):
    """Star ``K_{1,k}`` with ``t`` triangles hung on every skeleton edge."""

    k: int
    t: int

    def __post_init__(self):
        _positive(k=self.k, t=self.t)

    def build(self) -> Graph:
        k, t = self.k, self.t
        edges = []
        for i in range(k):
            leaf = i + 1
            edges.append((0, leaf))
            for j in range(t):
                apex = triangle_star_apex(k, t, i, j)
                edges.append((0, apex))
                edges.append((leaf, apex))
        return Graph.from_edges(1 + k + k * t, edges, name=str(self))

    def spec_string(self) -> str:
        return f"Kdelta({self.k},{self.t})"


def triangle_star_apex(k: int, t: int, i: int, j: int) -> int:
    """Apex of triangle ``j`` attached to skeleton edge ``{0, i+1}``."""
    return 1 + k + i * t + j


def build(spec: GadgetSpec | str) -> Graph:
    """Realize a gadget spec (or spec string) with its canonical labeling."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    return spec.build()


# ---------------------------------------------------------------------------
# spec-string grammar
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(Kjoin|Kdelta|Khat|Ktilde35|Kb|K|C|S|P|\d+|[(),])")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise SpecSyntaxError(f"unexpected input at {text[pos:]!r}")
        tokens.append(mt.group(1))
        pos = mt.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise SpecSyntaxError(f"bad spec {self.text!r}: expected {expected or 'token'}, got {tok!r}")
        self.i += 1
        return tok

    def number(self) -> int:
        tok = self.take()
        if not tok.isdigit():
            raise SpecSyntaxError(f"bad spec {self.text!r}: expected a number, got {tok!r}")
        return int(tok)

    def pair(self) -> tuple[int, int]:
        self.take("(")
        a = self.number()
        self.take(",")
        b = self.number()
        self.take(")")
        return a, b

    def spec(self) -> GadgetSpec:
        head = self.take()
        if head == "Ktilde35":
            return TildeK35()
        if head == "Kjoin":
            self.take("(")
            left = self.spec()
            self.take(",")
            right = self.spec()
            self.take(")")
            return Join(left, right)
        if head in ("Kdelta", "Khat", "Kb"):
            a, b = self.pair()
            return {"Kdelta": TriangleStar, "Khat": HatK, "Kb": CompleteBipartite}[head](a, b)
        if head in ("K", "C", "S", "P"):
            return {"K": Complete, "C": Cycle, "S": Star, "P": Path}[head](self.number())
        raise SpecSyntaxError(f"bad spec {self.text!r}: unknown family {head!r}")


def parse_spec(text: str) -> GadgetSpec:
    """Parse strings such as ``K4``, ``Kb(3,5)``, ``Kjoin(S3,P4)``, ``Kdelta(25,49)``."""
    parser = _Parser(text)
    spec = parser.spec()
    if parser.peek() is not None:
        raise SpecSyntaxError(f"trailing input in spec {text!r}")
    return spec


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------


def format_graph(g: Graph) -> str:
    lines = [f"graph {g.n} {g.m}"]
    lines += [f"{u} {v}" for u, v in g.edge_list]
    if g.sides is not None:
        lines += [f"side {v} {s}" for v, s in enumerate(g.sides)]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows or rows[0][0] != "graph" or len(rows[0]) != 3:
        raise ParameterError("graph file must start with 'graph <n> <m>'")
    n, m = int(rows[0][1]), int(rows[0][2])
    edges = []
    sides: list[int | None] = [None] * n
    for row in rows[1:]:
        if row[0] == "side":
            sides[int(row[1])] = int(row[2])
        else:
            edges.append((int(row[0]), int(row[1])))
    if len(edges) != m:
        raise ParameterError(f"header announces {m} edges, found {len(edges)}")
    has_sides = any(s is not None for s in sides)
    if has_sides and any(s is None for s in sides):
        raise ParameterError("side labels must cover every vertex")
    return Graph.from_edges(n, edges, sides if has_sides else None)


def write_graph(g: Graph, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(g))


def read_graph(path: str | os.PathLike) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())


def load_graph(arg: str) -> Graph:
    """Spec string or path to a graph file.  Specs never contain a slash."""
    if os.path.exists(arg) or os.sep in arg or "/" in arg:
        return read_graph(arg)
    return build(arg)


# ---------------------------------------------------------------------------
# copies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubgraphCopy:
    """An occurrence of a pattern: ``vertex_map[i]`` is the image of pattern vertex ``i``."""

    vertex_map: tuple[int, ...]
    edges: frozenset[Edge]

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.vertex_map)

    @classmethod
    def from_map(cls, pattern: Graph, vertex_map: Sequence[int]) -> "SubgraphCopy":
        vm = tuple(vertex_map)
        return cls(vm, frozenset(norm_edge(vm[u], vm[v]) for u, v in pattern.edges))


def _search_order(pattern: Graph) -> list[int]:
    """Pattern vertices, each next one maximizing links to those already placed."""
    order: list[int] = []
    placed: set[int] = set()
    remaining = set(range(pattern.n))
    while remaining:
        best = max(remaining, key=lambda v: (len(pattern.adj[v] & placed), pattern.degree(v), -v))
        order.append(best)
        placed.add(best)
        remaining.remove(best)
    return order


def injective_homomorphisms(host: Graph, pattern: Graph) -> Iterator[tuple[int, ...]]:
    """All injective edge-preserving maps pattern -> host, in deterministic order."""
    if pattern.n > host.n:
        return
    order = _search_order(pattern)
    back = [[w for w in pattern.adj[v] if w in set(order[:i])] for i, v in enumerate(order)]
    pdeg = [pattern.degree(v) for v in order]
    hadj = host.adj
    hdeg = [len(a) for a in hadj]
    image = [-1] * pattern.n
    used = [False] * host.n
    k = pattern.n

    def extend(i: int) -> Iterator[tuple[int, ...]]:
        if i == k:
            yield tuple(image)
            return
        anchors = back[i]
        if anchors:
            cands = hadj[image[anchors[0]]]
            for a in anchors[1:]:
                cands = cands & hadj[image[a]]
            cands = sorted(cands)
        else:
            cands = range(host.n)
        need = pdeg[i]
        v = order[i]
        for c in cands:
            if used[c] or hdeg[c] < need:
                continue
            image[v] = c
            used[c] = True
            yield from extend(i + 1)
            used[c] = False
        image[v] = -1

    yield from extend(0)


def automorphisms(g: Graph) -> list[tuple[int, ...]]:
    """Every automorphism as a tuple ``sigma`` with ``sigma[i]`` the image of ``i``."""
    return list(injective_homomorphisms(g, g))


def automorphism_count(g: Graph) -> int:
    """Order of the automorphism group, by exhaustive backtracking."""
    if g.n == 0:
        raise ParameterError("automorphism_count needs a nonempty graph")
    return sum(1 for _ in injective_homomorphisms(g, g))


def enumerate_copies(host: Graph, pattern: Graph) -> Iterator[SubgraphCopy]:
    """One :class:`SubgraphCopy` per unlabeled occurrence of ``pattern`` in ``host``.

    An injective homomorphism ``phi`` is reported only when it is the
    lexicographically smallest element of its orbit ``{phi o sigma}`` under
    the automorphisms of the pattern.
    """
    if pattern.n == 0:
        raise ParameterError("pattern must be nonempty")
    auts = [s for s in automorphisms(pattern) if any(i != x for i, x in enumerate(s))]
    k = pattern.n
    for phi in injective_homomorphisms(host, pattern):
        if all(phi <= tuple(phi[s[i]] for i in range(k)) for s in auts):
            yield SubgraphCopy.from_map(pattern, phi)


def count_copies(host: Graph, pattern: Graph) -> int:
    return sum(1 for _ in enumerate_copies(host, pattern))


def contains_triangle(g: Graph) -> bool:
    adj = g.adj
    return any(adj[u] & adj[v] for u, v in g.edges)


def common_neighborhood(g: Graph, xs: Iterable[int]) -> frozenset[int]:
    """Vertices outside ``xs`` adjacent to every vertex of ``xs``."""
    xs = frozenset(xs)
    for x in xs:
        if not 0 <= x < g.n:
            raise ParameterError(f"vertex {x} not in graph")
    common = frozenset(range(g.n))
    for x in xs:
        common = common & g.adj[x]
    return common - xs

"""Exact decision of the rainbow-arrow relation ``G -> H``.

Under a proper coloring two edges of a copy can only share a color if they
are disjoint, so a copy of ``H`` is non-rainbow iff one of its independent
edge pairs is monochromatic.  The search assigns colors edge by edge over
proper colorings taken up to renaming (each new class gets the next unused
id), which enumerates every partition of ``E(G)`` into matchings at most
once.  Each copy is a clause "some independent pair gets equal colors";
a copy whose pairs can no longer become equal kills the branch, and a copy
left with exactly one viable pair forces that pair.
"""

from __future__ import annotations

import enum
import itertools
import time
from dataclasses import dataclass, field

from .coloring import ProperColoring, check_proper, rainbow_census
from .errors import ResourceError
from .graph import Graph, SubgraphCopy, contains_triangle, enumerate_copies, norm_edge

ORACLE_EDGE_BUDGET = 10


class Status(enum.Enum):
    ARROWED = "arrowed"
    NOT_ARROWED = "not-arrowed"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class Budget:
    nodes: int | None = 10_000_000
    seconds: float | None = None


@dataclass
class SearchStats:
    nodes: int = 0
    prunes: int = 0
    forced: int = 0
    seconds: float = 0.0
    edges: int = 0
    copies: int = 0


@dataclass
class ArrowVerdict:
    status: Status
    witness: ProperColoring | None = None
    stats: SearchStats = field(default_factory=SearchStats)
    method: str = "search"
    certificate: str = ""

    @property
    def arrowed(self) -> bool | None:
        if self.status is Status.INDETERMINATE:
            return None
        return self.status is Status.ARROWED

    def as_dict(self) -> dict:
        s = self.stats
        return {
            "verdict": self.status.value,
            "method": self.method,
            "nodes": s.nodes,
            "prunes": s.prunes,
            "forced": s.forced,
            "seconds": round(s.seconds, 3),
            "edges": s.edges,
            "copies": s.copies,
            "certificate": self.certificate,
        }

    def as_lines(self) -> list[str]:
        return [f"{k}={v}" for k, v in self.as_dict().items()]


def _fresh_coloring(g: Graph) -> ProperColoring:
    return ProperColoring(g, {e: i for i, e in enumerate(g.edge_list)})


def _verified(g: Graph, h: Graph, coloring: ProperColoring) -> ProperColoring:
    coloring = check_proper(g, coloring.assignment)
    report = rainbow_census(coloring, h, witness_cap=1)
    if report.rainbow_copies:
        raise AssertionError("search produced a witness with a rainbow copy")
    return coloring


def _is_triangle(h: Graph) -> bool:
    return h.n == 3 and h.m == 3


def decide_arrow_fast_paths(g: Graph, h: Graph) -> ArrowVerdict | None:
    """Triangles are rainbow under every proper coloring: ``G -> K3`` iff ``G`` has one."""
    if not _is_triangle(h):
        return None
    stats = SearchStats(edges=g.m)
    if contains_triangle(g):
        return ArrowVerdict(Status.ARROWED, None, stats, "fast-path", "host contains a triangle")
    return ArrowVerdict(Status.NOT_ARROWED, _verified(g, h, _fresh_coloring(g)), stats,
                        "fast-path", "host is triangle-free")


class _Search:
    def __init__(self, g: Graph, h: Graph, budget: Budget):
        self.g = g
        self.budget = budget
        self.edges = g.edge_list
        index = g.edge_index
        m = len(self.edges)
        self.emask = [(1 << u) | (1 << v) for u, v in self.edges]

        self.copy_pairs: list[list[tuple[int, int]]] = []
        self.copy_edges: list[list[int]] = []
        for cp in enumerate_copies(g, h):
            ids = sorted(index[e] for e in cp.edges)
            pairs = [(a, b) for a, b in itertools.combinations(ids, 2)
                     if not self.emask[a] & self.emask[b]]
            self.copy_edges.append(ids)
            self.copy_pairs.append(pairs)
        self.edge_copies: list[list[int]] = [[] for _ in range(m)]
        self.partners: list[set[int]] = [set() for _ in range(m)]
        for ci, ids in enumerate(self.copy_edges):
            for e in ids:
                self.edge_copies[e].append(ci)
            for a, b in self.copy_pairs[ci]:
                self.partners[a].add(b)
                self.partners[b].add(a)
        self.order = self._static_order()

        self.color = [-1] * m
        self.cmask: list[int] = []
        self.trail: list[tuple[int, int, bool]] = []
        self.pending: list[tuple[int, int]] = []
        self.stats = SearchStats(edges=m, copies=len(self.copy_edges))
        self.deadline = None
        self.cursor = 0

    def _static_order(self) -> list[int]:
        """Edges ordered so copies fill up early; ties by degree sum, then index."""
        m = len(self.edges)
        deg = [self.g.degree(u) + self.g.degree(v) for u, v in self.edges]
        filled = [0] * len(self.copy_edges)
        placed = [False] * m
        order = []
        for _ in range(m):
            best = None
            best_key = None
            for e in range(m):
                if placed[e]:
                    continue
                key = (sum(filled[c] for c in self.edge_copies[e]), len(self.edge_copies[e]), deg[e], -e)
                if best_key is None or key > best_key:
                    best, best_key = e, key
            placed[best] = True
            order.append(best)
            for c in self.edge_copies[best]:
                filled[c] += 1
        return order

    # state changes

    def _assign(self, e: int, c: int) -> None:
        created = c == len(self.cmask)
        if created:
            self.cmask.append(self.emask[e])
        else:
            self.cmask[c] |= self.emask[e]
        self.color[e] = c
        self.trail.append((e, c, created))

    def _undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            e, c, created = self.trail.pop()
            self.color[e] = -1
            if created:
                self.cmask.pop()
            else:
                self.cmask[c] ^= self.emask[e]

    def _propagate(self, e: int, c: int) -> bool:
        """Assign ``e := c`` and follow forced pairs; False on contradiction."""
        self._assign(e, c)
        queue = [e]
        color, cmask, emask = self.color, self.cmask, self.emask
        while queue:
            x = queue.pop()
            for ci in self.edge_copies[x]:
                viable = None
                count = 0
                done = False
                for a, b in self.copy_pairs[ci]:
                    ca, cb = color[a], color[b]
                    if ca >= 0 and cb >= 0:
                        if ca == cb:
                            done = True
                            break
                        continue
                    if ca >= 0:
                        if cmask[ca] & emask[b]:
                            continue
                    elif cb >= 0:
                        if cmask[cb] & emask[a]:
                            continue
                    count += 1
                    if count > 1:
                        break
                    viable = (a, b)
                if done or count > 1:
                    continue
                if count == 0:
                    return False
                a, b = viable
                if color[a] >= 0 or color[b] >= 0:
                    known, free = (a, b) if color[a] >= 0 else (b, a)
                    k = color[known]
                    if cmask[k] & emask[free]:
                        return False
                    self._assign(free, k)
                    self.stats.forced += 1
                    queue.append(free)
                else:
                    self.pending.append((a, b))
        return True

    def _pick(self) -> int | None:
        while self.pending:
            a, b = self.pending[-1]
            if self.color[a] < 0:
                return a
            if self.color[b] < 0:
                return b
            self.pending.pop()
        for e in self.order:
            if self.color[e] < 0:
                return e
        return None

    def _candidates(self, e: int) -> list[int]:
        em = self.emask[e]
        free = [c for c, mask in enumerate(self.cmask) if not mask & em]
        preferred = {self.color[f] for f in self.partners[e] if self.color[f] >= 0}
        ordered = [c for c in free if c in preferred] + [c for c in free if c not in preferred]
        ordered.append(len(self.cmask))
        return ordered

    def _out_of_budget(self) -> bool:
        s = self.stats
        if self.budget.nodes is not None and s.nodes >= self.budget.nodes:
            return True
        if self.deadline is not None and s.nodes % 1024 == 0 and time.perf_counter() > self.deadline:
            return True
        return False

    def _dfs(self) -> bool:
        self.stats.nodes += 1
        if self._out_of_budget():
            raise _BudgetExhausted
        e = self._pick()
        if e is None:
            return True
        pend = len(self.pending)
        for c in self._candidates(e):
            mark = len(self.trail)
            if self._propagate(e, c):
                if self._dfs():
                    return True
            else:
                self.stats.prunes += 1
            self._undo(mark)
            del self.pending[pend:]
        return False

    def run(self) -> tuple[Status, ProperColoring | None]:
        if self.budget.seconds is not None:
            self.deadline = time.perf_counter() + self.budget.seconds
        try:
            found = self._dfs()
        except _BudgetExhausted:
            return Status.INDETERMINATE, None
        if not found:
            return Status.ARROWED, None
        assignment = {self.edges[i]: c for i, c in enumerate(self.color)}
        return Status.NOT_ARROWED, ProperColoring(self.g, assignment).canonical()


class _BudgetExhausted(Exception):
    pass


def decide_arrow(g: Graph, h: Graph, budget: Budget | None = None) -> ArrowVerdict:
    """Decide whether every proper coloring of ``g`` has a rainbow copy of ``h``.

    Returns an indeterminate verdict (never a wrong one) when the budget runs out.
    A not-arrowed verdict carries a witness coloring re-verified by census.
    """
    if h.n == 0:
        raise ValueError("pattern must be nonempty")
    budget = budget or Budget()
    fast = decide_arrow_fast_paths(g, h)
    if fast is not None:
        return fast
    t0 = time.perf_counter()
    search = _Search(g, h, budget)
    stats = search.stats
    if not search.copy_edges:
        stats.seconds = time.perf_counter() - t0
        return ArrowVerdict(Status.NOT_ARROWED, _verified(g, h, _fresh_coloring(g)), stats,
                            "no-copy", "host has no copy of the pattern")
    if any(not pairs for pairs in search.copy_pairs):
        stats.seconds = time.perf_counter() - t0
        return ArrowVerdict(Status.ARROWED, None, stats, "no-independent-pair",
                            "a copy whose edges pairwise intersect is rainbow under every proper coloring")
    status, witness = search.run()
    stats.seconds = time.perf_counter() - t0
    if status is Status.NOT_ARROWED:
        witness = _verified(g, h, witness)
        cert = f"witness with {witness.num_colors} colors and no rainbow copy"
    elif status is Status.ARROWED:
        cert = (f"exhausted proper colorings of {stats.edges} edges up to renaming: "
                f"nodes={stats.nodes} prunes={stats.prunes} forced={stats.forced}")
    else:
        cert = f"budget exhausted after {stats.nodes} nodes"
    return ArrowVerdict(status, witness, stats, "search", cert)


def brute_force_oracle(g: Graph, h: Graph, max_edges: int = ORACLE_EDGE_BUDGET) -> ArrowVerdict:
    """Reference verdict: every partition of ``E(g)`` into matchings, no rainbow pruning.

    Copies of ``h`` are found by trying every injective vertex tuple, so this
    shares no code with the search path.
    """
    if g.m > max_edges:
        raise ResourceError(f"{g.m} edges exceeds the oracle budget of {max_edges}")
    if h.n == 0:
        raise ValueError("pattern must be nonempty")
    t0 = time.perf_counter()
    hosts = range(g.n) if any(not h.adj[v] for v in range(h.n)) else [v for v in range(g.n) if g.adj[v]]
    copies: set[frozenset] = set()
    for verts in itertools.permutations(hosts, h.n):
        if all(g.has_edge(verts[u], verts[v]) for u, v in h.edges):
            copies.add(frozenset(norm_edge(verts[u], verts[v]) for u, v in h.edges))
    edges = g.edge_list
    index = {e: i for i, e in enumerate(edges)}
    copy_ids = [sorted(index[e] for e in cp) for cp in sorted(copies, key=sorted)]
    stats = SearchStats(edges=g.m, copies=len(copy_ids))
    color = [0] * len(edges)
    classes: list[set[int]] = []

    def leaf_ok() -> bool:
        return all(len({color[i] for i in ids}) < len(ids) for ids in copy_ids)

    def rec(i: int) -> bool:
        if i == len(edges):
            stats.nodes += 1
            return leaf_ok()
        u, v = edges[i]
        for c, verts in enumerate(classes):
            if u not in verts and v not in verts:
                verts.update((u, v))
                color[i] = c
                if rec(i + 1):
                    return True
                verts.difference_update((u, v))
        classes.append({u, v})
        color[i] = len(classes) - 1
        if rec(i + 1):
            return True
        classes.pop()
        return False

    found = rec(0)
    stats.seconds = time.perf_counter() - t0
    if found:
        witness = check_proper(g, dict(zip(edges, color)))
        return ArrowVerdict(Status.NOT_ARROWED, witness, stats, "oracle",
                            "enumerated partition with no rainbow copy")
    return ArrowVerdict(Status.ARROWED, None, stats, "oracle",
                        f"all {stats.nodes} partitions into matchings contain a rainbow copy")

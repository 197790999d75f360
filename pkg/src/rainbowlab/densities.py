"""Exact density functionals, balancedness, the threshold-exponent catalog,
and exact second-moment (Janson) quantities.

All densities are :class:`fractions.Fraction` values; nothing here compares
floats.  The subset-based functionals enumerate every vertex subset, so they
are limited to graphs with at most ``DENSITY_VERTEX_BUDGET`` vertices.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from .errors import ParameterError, ResourceError, UndefinedDensityError
from .graph import Complete, Graph, SubgraphCopy, enumerate_copies

DENSITY_VERTEX_BUDGET = 18
JANSON_DEFAULT_BUDGET = 9


def _check_budget(g: Graph, budget: int) -> None:
    if g.n > budget:
        raise ResourceError(f"{g.n} vertices exceeds the subset-enumeration budget of {budget}")


def subset_edge_counts(g: Graph) -> list[int]:
    """``counts[mask]`` is the number of edges induced by the vertex set ``mask``."""
    counts = [0] * (1 << g.n)
    adjm = g.adj_mask
    for mask in range(1, 1 << g.n):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        counts[mask] = counts[rest] + (adjm[low] & rest).bit_count()
    return counts


def _mask_connected(mask: int, adjm: tuple[int, ...]) -> bool:
    seen = frontier = mask & -mask
    while frontier:
        v = frontier.bit_length() - 1
        frontier &= ~(1 << v)
        new = adjm[v] & mask & ~seen
        seen |= new
        frontier |= new
    return seen == mask


def _mask_vertices(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def _m2_argmax(g: Graph, budget: int) -> tuple[Fraction, int]:
    if g.m < 2:
        raise UndefinedDensityError(f"m2 needs at least 2 edges, graph has {g.m}")
    _check_budget(g, budget)
    counts = subset_edge_counts(g)
    adjm = g.adj_mask
    best: Fraction | None = None
    best_mask = 0
    for mask in range(1, 1 << g.n):
        e = counts[mask]
        v = mask.bit_count()
        if e < 2 or v < 3:
            continue
        val = Fraction(e - 1, v - 2)
        # ties go to the larger vertex set, so a graph attaining its own maximum reports itself
        if best is not None and (val < best or (val == best and v <= best_mask.bit_count())):
            continue
        if _mask_connected(mask, adjm):
            best, best_mask = val, mask
    if best is None:
        raise UndefinedDensityError("no connected subgraph with at least 2 edges")
    return best, best_mask


def m2(h: Graph, budget: int = DENSITY_VERTEX_BUDGET) -> Fraction:
    """Maximum 2-density: max of (e(F)-1)/(v(F)-2) over connected F with e(F) >= 2."""
    return _m2_argmax(h, budget)[0]


def m1(h: Graph, budget: int = DENSITY_VERTEX_BUDGET) -> Fraction:
    """Maximum density: max of e(J)/v(J) over nonempty subgraphs J."""
    if h.n == 0:
        raise UndefinedDensityError("m1 of the empty graph")
    _check_budget(h, budget)
    counts = subset_edge_counts(h)
    return max(Fraction(counts[mask], mask.bit_count()) for mask in range(1, 1 << h.n))


def m_bip2(h: Graph, budget: int = DENSITY_VERTEX_BUDGET) -> Fraction:
    """Maximum bipartition density.

    Minimum over all vertex bipartitions (V1, V2) of max(m1(h[V1]), m1(h[V2])),
    with an empty side contributing 0.
    """
    if h.n == 0:
        raise UndefinedDensityError("m_bip2 of the empty graph")
    _check_budget(h, budget)
    counts = subset_edge_counts(h)
    full = (1 << h.n) - 1
    # best[mask] = m1(h[mask]) via a subset-maximum sweep
    best = [Fraction(0)] * (1 << h.n)
    for mask in range(1, full + 1):
        val = Fraction(counts[mask], mask.bit_count())
        sub = mask
        while sub:
            low = sub & -sub
            cand = best[mask ^ low]
            if cand > val:
                val = cand
            sub ^= low
        best[mask] = val
    return min(max(best[mask], best[full ^ mask]) for mask in range(full + 1))


def strictly_2_balanced(h: Graph, budget: int = DENSITY_VERTEX_BUDGET) -> bool:
    """True iff every proper subgraph K with e(K) >= 2 has m2(K) < m2(h).

    Equivalently, (e-1)/(v-2) of the whole graph strictly beats that of every
    proper vertex subset spanning at least two edges (connected or not).
    """
    if h.m < 2:
        raise UndefinedDensityError(f"m2 needs at least 2 edges, graph has {h.m}")
    _check_budget(h, budget)
    m2(h, budget)  # raises when undefined
    counts = subset_edge_counts(h)
    full = (1 << h.n) - 1
    whole = Fraction(h.m - 1, h.n - 2)
    for mask in range(1, full):
        e = counts[mask]
        if e >= 2 and Fraction(e - 1, mask.bit_count() - 2) >= whole:
            return False
    return True


@dataclass(frozen=True)
class DensityReport:
    m2: Fraction | None
    m1: Fraction
    m_bip2: Fraction | None
    strictly_2_balanced: bool | None
    argmax_vertices: tuple[int, ...] | None
    argmax_edges: tuple[tuple[int, int], ...] | None

    def as_lines(self) -> list[str]:
        def rat(x):
            return "undefined" if x is None else f"{x.numerator}/{x.denominator}"

        balanced = "undefined" if self.strictly_2_balanced is None else str(self.strictly_2_balanced).lower()
        verts = "undefined" if self.argmax_vertices is None else ",".join(map(str, self.argmax_vertices))
        edges = "undefined" if self.argmax_edges is None else ",".join(f"{u}-{v}" for u, v in self.argmax_edges)
        return [
            f"m2={rat(self.m2)}",
            f"m1={rat(self.m1)}",
            f"m_bip2={rat(self.m_bip2)}",
            f"strictly_2_balanced={balanced}",
            f"argmax_vertices={verts}",
            f"argmax_edges={edges}",
        ]


def density_report(h: Graph, bipartition: bool = True,
                   budget: int = DENSITY_VERTEX_BUDGET) -> DensityReport:
    try:
        val, mask = _m2_argmax(h, budget)
        balanced = strictly_2_balanced(h, budget)
        verts = _mask_vertices(mask)
        vs = set(verts)
        arg_edges = tuple(e for e in h.edge_list if e[0] in vs and e[1] in vs)
    except UndefinedDensityError:
        val, balanced, verts, arg_edges = None, None, None, None
    return DensityReport(
        m2=val,
        m1=m1(h, budget),
        m_bip2=m_bip2(h, budget) if bipartition else None,
        strictly_2_balanced=balanced,
        argmax_vertices=verts,
        argmax_edges=arg_edges,
    )


# ---------------------------------------------------------------------------
# threshold catalog
# ---------------------------------------------------------------------------

_CASES = {
    "OddCycle": 1,
    "K3": None,
    "K5": None,
    "K7": None,
    "K4": None,
    "OddComplete": 5,
    "EvenCompleteUpper": 4,
    "EvenLowerBound": 5,
}


def _m2_complete(r: int) -> Fraction:
    return Fraction(comb(r, 2) - 1, r - 2)


def threshold_exponent(case: str, r: int | None = None) -> Fraction:
    """Exponent ``a`` of the perturbed-model threshold (or bound) ``n^-a``.

    ``case`` is one of ``OddCycle`` (``r`` is the half-length ``l``; the cycle
    is ``C_{2l+1}``), ``K3``, ``K4``, ``K5``, ``K7``, ``OddComplete`` (target
    ``K_{2r-1}``), ``EvenCompleteUpper`` (1-statement for ``K_{2r}``) and
    ``EvenLowerBound`` (conjectured threshold for ``K_{2r}``).  A string such
    as ``"OddComplete(6)"`` is also accepted.
    """
    mt = re.fullmatch(r"\s*(\w+)\s*(?:\(\s*(\d+)\s*\))?\s*", case)
    if not mt or mt.group(1) not in _CASES:
        raise ParameterError(f"unknown threshold case {case!r}")
    name = mt.group(1)
    if mt.group(2) is not None:
        if r is not None and r != int(mt.group(2)):
            raise ParameterError("case parameter given twice with different values")
        r = int(mt.group(2))
    least = _CASES[name]
    if least is None:
        if r is not None:
            raise ParameterError(f"case {name} takes no parameter")
    elif r is None or r < least:
        raise ParameterError(f"case {name} needs an integer parameter >= {least}, got {r!r}")

    if name in ("OddCycle", "K3"):
        return Fraction(2)
    if name == "K5":
        return Fraction(1)
    if name == "K7":
        return Fraction(7, 15)
    if name == "K4":
        return Fraction(5, 4)
    if name in ("OddComplete", "EvenLowerBound"):
        return 1 / _m2_complete(r)
    return Fraction(r - 2, comb(r, 2))  # EvenCompleteUpper


# ---------------------------------------------------------------------------
# Janson quantities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Polynomial:
    """Polynomial in ``p`` with exact coefficients, stored as ``{exponent: coefficient}``."""

    coeffs: tuple[tuple[int, Fraction], ...]

    @classmethod
    def from_dict(cls, d: Mapping[int, int | Fraction]) -> "Polynomial":
        return cls(tuple(sorted((k, Fraction(v)) for k, v in d.items() if v != 0)))

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.coeffs)

    def coeff(self, k: int) -> Fraction:
        return self.as_dict().get(k, Fraction(0))

    def __call__(self, p: Fraction | int | float):
        return sum((c * p ** k for k, c in self.coeffs), Fraction(0) if not isinstance(p, float) else 0.0)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        d = self.as_dict()
        for k, c in other.coeffs:
            d[k] = d.get(k, 0) - c
        return Polynomial.from_dict(d)

    def scale(self, factor: Fraction) -> "Polynomial":
        return Polynomial.from_dict({k: c * factor for k, c in self.coeffs})

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*p^{k}" for k, c in self.coeffs)


@dataclass(frozen=True)
class JansonQuantities:
    lam: Polynomial
    delta_bar: Polynomial
    delta: Polynomial
    n: int
    pattern: Graph
    copies: int


def janson_quantities(pattern: Graph, n: int, restrict: Iterable[Iterable[int]] | None = None,
                      budget: int = JANSON_DEFAULT_BUDGET) -> JansonQuantities:
    """Exact lambda, Delta-bar and Delta over ``K_n`` as polynomials in ``p``.

    Copies are unlabeled subgraphs of ``K_n``; Delta-bar sums over ordered
    pairs sharing at least one edge (the diagonal included) and
    ``Delta = (Delta-bar - diagonal) / 2``.  With ``restrict``, only copies
    whose vertex set is a member of the family are counted.
    """
    if n > budget:
        raise ResourceError(f"n={n} exceeds the Janson enumeration budget of {budget}")
    if pattern.m == 0:
        raise ParameterError("pattern must have at least one edge")
    family = None if restrict is None else {frozenset(s) for s in restrict}
    copies: list[SubgraphCopy] = []
    if n >= pattern.n:
        for cp in enumerate_copies(Complete(n).build() if n > 0 else Graph(0, frozenset()), pattern):
            if family is None or cp.vertices in family:
                copies.append(cp)
    index = {}
    masks = []
    for cp in copies:
        mask = 0
        for e in cp.edges:
            mask |= 1 << index.setdefault(e, len(index))
        masks.append(mask)
    eh = pattern.m
    lam = {eh: len(copies)} if copies else {}
    dbar: dict[int, int] = {}
    off: dict[int, int] = {}
    for i, a in enumerate(masks):
        for j, b in enumerate(masks):
            shared = (a & b).bit_count()
            if shared:
                k = 2 * eh - shared
                dbar[k] = dbar.get(k, 0) + 1
                if i != j:
                    off[k] = off.get(k, 0) + 1
    return JansonQuantities(
        lam=Polynomial.from_dict(lam),
        delta_bar=Polynomial.from_dict(dbar),
        delta=Polynomial.from_dict({k: Fraction(c, 2) for k, c in off.items()}),
        n=n,
        pattern=pattern,
        copies=len(copies),
    )


@dataclass(frozen=True)
class JansonBounds:
    """Upper bounds on probabilities; each is ``min(1, exp(exponent))``."""

    lower_tail: float
    nonexistence_1: float
    nonexistence_2: float
    lower_tail_exponent: Fraction
    nonexistence_1_exponent: Fraction
    nonexistence_2_exponent: Fraction


def _capped_exp(x: Fraction) -> float:
    return 1.0 if x >= 0 else math.exp(x)


def janson_bounds(q: JansonQuantities, p: Fraction | int, t: Fraction | int) -> JansonBounds:
    """Evaluate exp(-t^2/2Dbar), exp(-lambda+Delta), exp(-lambda^2/(lambda+2Delta)) at ``p``."""
    p = Fraction(p)
    t = Fraction(t)
    if not 0 < p <= 1:
        raise ParameterError(f"p must lie in (0, 1], got {p}")
    lam = q.lam(p)
    if lam == 0:
        zero = Fraction(0)
        return JansonBounds(1.0, 1.0, 1.0, zero, zero, zero)
    if not 0 < t <= lam:
        raise ParameterError(f"t must lie in (0, lambda={lam}], got {t}")
    dbar = q.delta_bar(p)
    delta = q.delta(p)
    e_tail = -t * t / (2 * dbar)
    e_one = -lam + delta
    e_two = -lam * lam / (lam + 2 * delta)
    return JansonBounds(_capped_exp(e_tail), _capped_exp(e_one), _capped_exp(e_two),
                        e_tail, e_one, e_two)

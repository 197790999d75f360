from __future__ import annotations

import itertools
import math
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from rainbowlab.densities import (
    density_report,
    janson_bounds,
    janson_quantities,
    m1,
    m2,
    m_bip2,
    strictly_2_balanced,
    threshold_exponent,
)
from rainbowlab.errors import ParameterError, ResourceError, UndefinedDensityError
from rainbowlab.graph import Graph, build


def nx_of(g: Graph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges)
    return G


def oracle_m1(G: nx.Graph) -> Fraction:
    best = Fraction(0)
    nodes = list(G.nodes())
    for k in range(1, len(nodes) + 1):
        for sub in itertools.combinations(nodes, k):
            best = max(best, Fraction(G.subgraph(sub).number_of_edges(), k))
    return best


def oracle_m2(G: nx.Graph) -> Fraction | None:
    best = None
    for k in range(3, G.number_of_nodes() + 1):
        for sub in itertools.combinations(G.nodes(), k):
            S = G.subgraph(sub)
            if S.number_of_edges() >= 2 and nx.is_connected(S):
                val = Fraction(S.number_of_edges() - 1, k - 2)
                best = val if best is None else max(best, val)
    return best


def oracle_mbip2(G: nx.Graph) -> Fraction:
    nodes = list(G.nodes())
    best = None
    for labels in itertools.product((0, 1), repeat=len(nodes)):
        parts = [[v for v, s in zip(nodes, labels) if s == side] for side in (0, 1)]
        val = max(oracle_m1(G.subgraph(p)) if p else Fraction(0) for p in parts)
        best = val if best is None else min(best, val)
    return best


def test_reference_values():
    assert m2(build("K4")) == Fraction(5, 2)
    assert m2(build("K5")) == 3
    assert m2(build("C5")) == Fraction(4, 3)
    assert m2(build("K3")) == 2
    assert m1(build("S3")) == Fraction(3, 4)
    assert m1(build("S4")) == Fraction(4, 5)
    assert m1(build("K4")) == Fraction(3, 2)
    assert m_bip2(build("Kjoin(S3,S4)")) == Fraction(4, 5)
    assert m_bip2(build("K4")) == Fraction(1, 2)


def test_hat_k34_densities():
    hat = build("Khat(3,4)")
    assert m2(hat) == Fraction(14, 5)
    # the K7 exponent is v/e of this gadget
    assert Fraction(hat.n, hat.m) == threshold_exponent("K7")


def test_m2_undefined_for_matchings():
    with pytest.raises(UndefinedDensityError):
        m2(build("K2"))
    with pytest.raises(UndefinedDensityError):
        m2(Graph.from_edges(4, [(0, 1), (2, 3)]))


def test_budget():
    with pytest.raises(ResourceError):
        m1(build("K20"))


def test_strict_balance():
    assert strictly_2_balanced(build("K4"))
    assert strictly_2_balanced(build("C5"))
    assert not strictly_2_balanced(build("S3"))
    # a triangle with a pendant edge is dominated by the triangle
    assert not strictly_2_balanced(Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]))


def test_report_lines():
    lines = density_report(build("K4")).as_lines()
    assert lines[0] == "m2=5/2"
    assert "m_bip2=1/2" in lines
    rep = density_report(build("K2"))
    assert rep.m2 is None and rep.as_lines()[0] == "m2=undefined"


small_graphs = st.integers(2, 6).flatmap(
    lambda n: st.sets(st.sampled_from(list(itertools.combinations(range(n), 2))), max_size=12)
    .map(lambda es: Graph.from_edges(n, es)))


@settings(max_examples=60, deadline=None)
@given(small_graphs)
def test_m1_m2_against_oracle(g):
    G = nx_of(g)
    assert m1(g) == oracle_m1(G)
    expected = oracle_m2(G)
    if expected is None:
        with pytest.raises(UndefinedDensityError):
            m2(g)
    else:
        assert m2(g) == expected


@settings(max_examples=30, deadline=None)
@given(small_graphs)
def test_mbip2_against_oracle(g):
    assert m_bip2(g) == oracle_mbip2(nx_of(g))


@settings(max_examples=40, deadline=None)
@given(small_graphs)
def test_density_monotone_under_edge_addition(g):
    missing = [e for e in itertools.combinations(range(g.n), 2) if e not in g.edges]
    if not missing:
        return
    bigger = g.with_edges([missing[0]])
    assert m1(bigger) >= m1(g)
    assert m_bip2(bigger) >= m_bip2(g)


@pytest.mark.parametrize("case,value", [
    ("K3", Fraction(2)),
    ("OddCycle(3)", Fraction(2)),
    ("K5", Fraction(1)),
    ("K7", Fraction(7, 15)),
    ("K4", Fraction(5, 4)),
    ("EvenCompleteUpper(4)", Fraction(1, 3)),
    ("EvenCompleteUpper(5)", Fraction(3, 10)),
    ("OddComplete(5)", Fraction(1, 3)),
    ("EvenLowerBound(6)", Fraction(4, 14)),
])
def test_threshold_catalog(case, value):
    assert threshold_exponent(case) == value


def test_threshold_catalog_errors():
    with pytest.raises(ParameterError):
        threshold_exponent("K9")
    with pytest.raises(ParameterError):
        threshold_exponent("OddComplete", 2)
    with pytest.raises(ParameterError):
        threshold_exponent("K5", 3)


def oracle_triangle_janson(n: int) -> tuple[dict[int, int], dict[int, int]]:
    triples = list(itertools.combinations(range(n), 3))
    lam = {3: len(triples)} if triples else {}
    dbar: dict[int, int] = {}
    for a in triples:
        for b in triples:
            shared_vertices = len(set(a) & set(b))
            if shared_vertices >= 2:
                shared_edges = 3 if shared_vertices == 3 else 1
                k = 6 - shared_edges
                dbar[k] = dbar.get(k, 0) + 1
    return lam, dbar


@pytest.mark.parametrize("n", range(0, 7))
def test_triangle_janson_matches_double_loop(n):
    q = janson_quantities(build("K3"), n)
    lam, dbar = oracle_triangle_janson(n)
    assert q.lam.as_dict() == {k: Fraction(v) for k, v in lam.items()}
    assert q.delta_bar.as_dict() == {k: Fraction(v) for k, v in dbar.items()}
    assert q.delta_bar - q.lam == q.delta.scale(Fraction(2))


def test_janson_bounds_sample():
    q = janson_quantities(build("K2"), 3)
    b = janson_bounds(q, Fraction(1, 2), Fraction(3, 2))
    # three disjoint edges: lambda = 3/2, Dbar = lambda, Delta = 0
    assert b.lower_tail_exponent == Fraction(-3, 4)
    assert math.isclose(b.nonexistence_1, math.exp(-1.5))
    assert math.isclose(b.nonexistence_2, math.exp(-1.5))


def test_janson_vacuous_when_pattern_absent():
    q = janson_quantities(build("K4"), 3)
    assert q.copies == 0
    b = janson_bounds(q, Fraction(1, 3), 1)
    assert (b.lower_tail, b.nonexistence_1, b.nonexistence_2) == (1.0, 1.0, 1.0)


def test_janson_bounds_at_p_one_are_capped():
    for n in range(3, 7):
        q = janson_quantities(build("K3"), n)
        b = janson_bounds(q, 1, q.lam(1))
        for v in (b.lower_tail, b.nonexistence_1, b.nonexistence_2):
            assert 0 < v <= 1
    q = janson_quantities(build("K3"), 6)
    assert janson_bounds(q, 1, 20).nonexistence_1_exponent == 70


def test_janson_argument_checks():
    q = janson_quantities(build("K3"), 5)
    with pytest.raises(ParameterError):
        janson_bounds(q, 0, 1)
    with pytest.raises(ParameterError):
        janson_bounds(q, 1, 100)
    with pytest.raises(ResourceError):
        janson_quantities(build("K3"), 40)

from __future__ import annotations

import itertools
import time

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from rainbowlab.errors import ParameterError, SpecSyntaxError
from rainbowlab.graph import (
    Graph,
    HatK,
    Join,
    Star,
    TriangleStar,
    automorphism_count,
    build,
    common_neighborhood,
    contains_triangle,
    count_copies,
    enumerate_copies,
    format_graph,
    load_graph,
    parse_graph,
    parse_spec,
    read_graph,
    triangle_star_apex,
    write_graph,
)

from conftest import to_graph


def brute_copies(host: Graph, pattern: Graph) -> set[frozenset]:
    found = set()
    for verts in itertools.permutations(range(host.n), pattern.n):
        if all(host.has_edge(verts[u], verts[v]) for u, v in pattern.edges):
            found.add(frozenset(tuple(sorted((verts[u], verts[v]))) for u, v in pattern.edges))
    return found


def test_complete_and_cycle_counts():
    assert build("K5").m == 10
    assert build("C7").m == 7
    assert build("Kb(3,5)").m == 15
    assert build("P4").m == 3
    assert build("S4").m == 4


def test_hat_and_tilde():
    hat = build("Khat(3,5)")
    assert (hat.n, hat.m) == (8, 18)
    tilde = build("Ktilde35")
    assert tilde.m == 22
    assert all(tilde.has_edge(3, j) for j in range(4, 8))
    with pytest.raises(ParameterError):
        HatK(4, 4)


def test_join_sizes():
    g = build("Kjoin(S3,S4)")
    assert (g.n, g.m) == (9, 3 + 4 + 20)
    assert g.sides == (0,) * 4 + (1,) * 5


def test_triangle_star_structure():
    g = TriangleStar(3, 5).build()
    assert (g.n, g.m) == (1 + 3 + 15, 3 + 30)
    apex = triangle_star_apex(3, 5, 2, 4)
    assert g.has_edge(0, apex) and g.has_edge(3, apex)
    assert count_copies(g, build("K3")) == 15


def test_large_triangle_star_is_fast():
    t0 = time.perf_counter()
    g = build("Kdelta(25,49)")
    assert (g.n, g.m) == (1251, 2475)
    assert time.perf_counter() - t0 < 1.0


@pytest.mark.parametrize("text", ["K4", "C5", "Kb(3,5)", "S3", "P4", "Khat(3,5)", "Ktilde35",
                                  "Kjoin(S3,S4)", "Kjoin(K2,P4)", "Kdelta(2,3)"])
def test_spec_roundtrip(text):
    spec = parse_spec(text)
    assert spec.spec_string() == text
    assert build(spec) == build(text)


@pytest.mark.parametrize("bad", ["", "K", "Kb(3)", "Q4", "K4)", "Kjoin(K2)", "C2", "K0"])
def test_bad_specs(bad):
    with pytest.raises(ParameterError):
        build(bad)


def test_spec_syntax_error_is_parameter_error():
    with pytest.raises(SpecSyntaxError):
        parse_spec("Kb(3,")


def test_graph_file_roundtrip(tmp_path):
    g = build("Kjoin(P3,S3)")
    path = tmp_path / "g.txt"
    write_graph(g, path)
    assert read_graph(path) == g
    assert read_graph(path).sides == g.sides
    assert load_graph(str(path)) == g
    assert format_graph(g).splitlines()[0] == f"graph {g.n} {g.m}"


def test_parse_graph_rejects_miscounted_header():
    with pytest.raises(ParameterError):
        parse_graph("graph 3 2\n0 1\n")


def test_graph_validation():
    with pytest.raises(ParameterError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(ParameterError):
        Graph.from_edges(2, [(0, 2)])


def test_automorphism_counts():
    assert automorphism_count(build("K4")) == 24
    assert automorphism_count(build("C5")) == 10
    assert automorphism_count(build("P4")) == 2
    assert automorphism_count(build("S3")) == 6


@pytest.mark.parametrize("host,pattern,expected", [
    ("K6", "K4", 15),
    ("K4", "K3", 4),
    ("K4", "C4", 3),
    ("K5", "C5", 12),
    ("Kb(3,3)", "C4", 9),
])
def test_copy_counts(host, pattern, expected):
    assert count_copies(build(host), build(pattern)) == expected


def test_petersen_has_twelve_pentagons():
    g = to_graph(nx.petersen_graph())
    assert count_copies(g, build("C5")) == 12
    assert not contains_triangle(g)


graphs = st.integers(2, 6).flatmap(
    lambda n: st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=12)
    .map(lambda es: Graph.from_edges(n, {tuple(sorted(e)) for e in es if e[0] != e[1]})))


@settings(max_examples=60, deadline=None)
@given(graphs, st.sampled_from(["K3", "P3", "P4", "C4", "S3", "K4"]))
def test_copies_match_permutation_oracle(host, pattern):
    h = build(pattern)
    found = {cp.edges for cp in enumerate_copies(host, h)}
    assert found == brute_copies(host, h)
    assert len(found) == count_copies(host, h)


@settings(max_examples=40, deadline=None)
@given(graphs)
def test_triangle_detection_matches_networkx(g):
    G = nx.Graph(list(g.edges))
    assert contains_triangle(g) == (sum(nx.triangles(G).values()) > 0 if G.number_of_nodes() else False)


def test_common_neighborhood():
    g = build("Khat(3,5)")
    assert common_neighborhood(g, [0, 1, 2]) == frozenset(range(3, 8))
    assert common_neighborhood(g, [3]) == frozenset({0, 1, 2})

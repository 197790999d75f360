from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rainbowlab.coloring import check_proper, rainbow_census
from rainbowlab.errors import ResourceError
from rainbowlab.graph import Graph, build
from rainbowlab.solver import (
    Budget,
    Status,
    brute_force_oracle,
    decide_arrow,
    decide_arrow_fast_paths,
)


def test_triangle_fast_path():
    assert decide_arrow_fast_paths(build("C5"), build("K3")).status is Status.NOT_ARROWED
    assert decide_arrow_fast_paths(build("K4"), build("K3")).status is Status.ARROWED
    assert decide_arrow_fast_paths(build("Kb(3,3)"), build("K3")).status is Status.NOT_ARROWED
    assert decide_arrow_fast_paths(build("K4"), build("C4")) is None


def test_trivial_verdicts():
    assert decide_arrow(build("K3"), build("K3")).arrowed
    v = decide_arrow(build("C5"), build("C5"))
    assert v.status is Status.NOT_ARROWED
    assert rainbow_census(v.witness, build("C5")).rainbow_copies == 0


def test_c5_three_color_witness():
    c5 = build("C5")
    col = check_proper(c5, dict(zip([(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)], [1, 2, 1, 2, 3])))
    assert rainbow_census(col, c5).rainbow_copies == 0


def test_stars_and_paths():
    # a star's edges pairwise meet, so any copy is rainbow
    v = decide_arrow(build("S4"), build("S3"))
    assert v.arrowed and v.method == "no-independent-pair"
    assert decide_arrow(build("P4"), build("K4")).status is Status.NOT_ARROWED


def test_gadget_verdicts():
    k4 = build("K4")
    assert decide_arrow(build("Khat(3,4)"), k4).status is Status.ARROWED
    assert decide_arrow(build("Kjoin(S3,S4)"), k4).status is Status.ARROWED
    v = decide_arrow(build("Kjoin(P4,P4)"), k4)
    assert v.status is Status.NOT_ARROWED
    assert rainbow_census(v.witness, k4).rainbow_copies == 0


def test_budget_gives_indeterminate():
    v = decide_arrow(build("K8"), build("C5"), Budget(nodes=3))
    assert v.status is Status.INDETERMINATE
    assert v.arrowed is None and v.witness is None
    assert v.stats.nodes == 3


def test_determinism():
    g, h = build("Kjoin(P4,S3)"), build("K4")
    a, b = decide_arrow(g, h), decide_arrow(g, h)
    assert a.witness.assignment == b.witness.assignment
    assert a.stats.nodes == b.stats.nodes


def test_oracle_examples():
    assert brute_force_oracle(build("C4"), build("C4")).status is Status.NOT_ARROWED
    v = brute_force_oracle(build("K4"), build("K4"))
    assert v.status is Status.NOT_ARROWED
    assert rainbow_census(v.witness, build("K4")).rainbow_copies == 0
    with pytest.raises(ResourceError):
        brute_force_oracle(build("K6"), build("K3"))


def test_oracle_agrees_with_fast_path_up_to_six_edges(small_connected):
    k3 = build("K3")
    for g in small_connected:
        if g.m <= 6:
            assert brute_force_oracle(g, k3).status is decide_arrow_fast_paths(g, k3).status


graphs = st.integers(3, 7).flatmap(
    lambda n: st.sets(st.sampled_from(list(itertools.combinations(range(n), 2))), min_size=1, max_size=10)
    .map(lambda es: Graph.from_edges(n, es)))
patterns = st.sampled_from(["K3", "C4", "C5", "K4", "P3", "P4", "P5", "S3", "Kb(2,3)"])


@settings(max_examples=120, deadline=None)
@given(graphs, patterns)
def test_search_matches_oracle(g, pattern):
    h = build(pattern)
    got = decide_arrow(g, h)
    assert got.status is brute_force_oracle(g, h).status
    if got.witness is not None:
        assert rainbow_census(got.witness, h).rainbow_copies == 0


@settings(max_examples=60, deadline=None)
@given(graphs, patterns, st.integers(0, 2**32 - 1))
def test_monotone_under_edge_addition(g, pattern, seed):
    h = build(pattern)
    rng = np.random.default_rng(seed)
    missing = [e for e in itertools.combinations(range(g.n), 2) if e not in g.edges]
    extra = [missing[i] for i in rng.permutation(len(missing))[:3]]
    bigger = g.with_edges(extra)
    if decide_arrow(g, h).arrowed:
        assert decide_arrow(bigger, h).arrowed

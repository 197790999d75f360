from __future__ import annotations

import itertools

import numpy as np
import pytest

from rainbowlab.coloring import ProperColoring, check_proper, is_rainbow, random_proper_coloring, rainbow_census
from rainbowlab.constructions import (
    COMPAT_C0,
    COMPAT_C1,
    SHAPES,
    Component,
    ComponentStructure,
    PaletteAllocator,
    appendix_b_coloring,
    assemble_rainbow_k7,
    balanced_seed,
    build_k7_instance,
    extract_rainbow_k5,
    greedy_compatible_set,
    greedy_interest_set,
    greedy_rainbow_odd_cycle,
    matching_removal_triangle,
    random_component_structure,
    random_k7_coloring,
    random_tilde_coloring,
    structure_from_graph,
    zero_statement_coloring,
)
from rainbowlab.errors import GadgetStateError, InapplicableError, ParameterError, StructureError
from rainbowlab.graph import Graph, HatK, TildeK35, TriangleStar, build, norm_edge, triangle_star_apex

K4 = build("K4")


def distinct(g: Graph, start: int = 1) -> dict:
    return {e: start + i for i, e in enumerate(g.edge_list)}


# -- block colorings ---------------------------------------------------------


@pytest.mark.parametrize("left,right", list(itertools.product(SHAPES, repeat=2)))
def test_block_coloring_has_no_rainbow_k4(left, right):
    col = appendix_b_coloring(left, right)
    assert rainbow_census(col, K4).rainbow_copies == 0


def test_star_star_table():
    # left star: center 0, leaves 1..3; right star: center 4, leaves 5..7
    col = appendix_b_coloring("K13", "K13").assignment
    assert [col[e] for e in [(1, 6), (0, 4), (2, 7), (3, 5)]] == [4] * 4
    assert col[(0, 6)] == col[(3, 4)] == 5
    assert col[(1, 4)] == col[(0, 7)] == 6
    assert col[(2, 4)] == col[(0, 5)] == 7
    cross = [c for (u, v), c in col.items() if u < 4 <= v]
    assert sum(1 for c in cross if c >= 8) == 16 - 10
    assert len({c for c in cross if c >= 8}) == 6


def test_internal_colors():
    col = appendix_b_coloring("P4", "K2").assignment
    assert [col[(0, 1)], col[(1, 2)], col[(2, 3)], col[(4, 5)]] == [1, 2, 3, 1]


def test_reduction_matches_restriction():
    # P3 and K2 are the prefixes 0-1-2 and 0-1 of the right-hand P4
    big = appendix_b_coloring("P4", "P4")
    keep = {0: 0, 1: 1, 2: 2, 4: 3, 5: 4}
    restricted = {(keep[u], keep[v]): c for (u, v), c in big.assignment.items() if u in keep and v in keep}
    small = appendix_b_coloring("P3", "K2")
    col = check_proper(small.host, restricted)
    assert rainbow_census(col, K4).rainbow_copies == 0
    table = {e: c for e, c in restricted.items() if c < 8}
    assert all(small.assignment[e] == c for e, c in table.items())


def test_bad_shape():
    with pytest.raises(ParameterError):
        appendix_b_coloring("K3", "P4")


# -- zero-statement coloring ----------------------------------------------------


def test_empty_structure_gives_unique_colors():
    seed = balanced_seed(6)
    col = zero_statement_coloring(seed, ComponentStructure())
    assert len(set(col.assignment.values())) == seed.m == 9
    assert rainbow_census(col, K4).total_copies == 0


def test_one_edge_per_side():
    seed = balanced_seed(8)
    s = ComponentStructure((Component("K2", (0, 1)),), (Component("K2", (4, 5)),))
    col = zero_statement_coloring(seed, s)
    rep = rainbow_census(col, K4)
    assert rep.total_copies == 1 and rep.rainbow_copies == 0


def test_two_stars_and_a_path():
    seed = balanced_seed(16)
    s = ComponentStructure((Component("K13", (0, 1, 2, 3)), Component("K13", (4, 5, 6, 7))),
                           (Component("P4", (8, 9, 10, 11)),))
    col = zero_statement_coloring(seed, s)
    rep = rainbow_census(col, K4)
    assert rep.total_copies > 0 and rep.rainbow_copies == 0


def test_palette_blocks():
    s = ComponentStructure((Component("K13", (0, 1, 2, 3)), Component("K2", (4, 5))),
                           (Component("P3", (8, 9, 10)),))
    pal = PaletteAllocator.for_structure(s)
    pal.check()
    assert pal.blocks[(0, 0)] == range(4, 16)
    assert pal.blocks[(1, 0)] == range(16, 22)
    assert pal.fresh_start == 22


def test_structure_errors():
    with pytest.raises(StructureError):
        Component("P4", (0, 1, 2))
    with pytest.raises(StructureError):
        Component("K2", (3, 3))
    with pytest.raises(StructureError):
        ComponentStructure((Component("K2", (0, 1)), Component("P3", (1, 2, 3))))
    with pytest.raises(StructureError):
        zero_statement_coloring(balanced_seed(8), ComponentStructure((Component("K2", (3, 4)),)))
    with pytest.raises(StructureError):
        zero_statement_coloring(build("C4"), ComponentStructure())
    with pytest.raises(ParameterError):
        Component("C4", (0, 1, 2, 3))


def test_structure_read_off_a_graph():
    seed = balanced_seed(10)
    g = seed.with_edges([(0, 1), (1, 2), (5, 6), (5, 7), (5, 8)])
    s = structure_from_graph(seed, g)
    assert s.left_components == (Component("P3", (0, 1, 2)),)
    assert s.right_components == (Component("K13", (5, 6, 7, 8)),)
    with pytest.raises(StructureError):
        structure_from_graph(seed, g.with_edges([(0, 2)]))


def test_random_structures():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(8, 25))
        col = zero_statement_coloring(balanced_seed(n), random_component_structure(n, rng))
        assert rainbow_census(col, K4).rainbow_copies == 0


# -- K5 extraction ------------------------------------------------------------


def test_k5_disjoint_palettes_takes_first_leaf():
    g = TildeK35().build()
    col = check_proper(g, distinct(g))
    assert extract_rainbow_k5(g, col).vertex_map == (0, 1, 2, 3, 4)


def test_k5_skips_three_leaves():
    g = TildeK35().build()
    a = distinct(g)
    tri = [a[(0, 1)], a[(0, 2)], a[(1, 2)]]
    for leaf, c in zip((4, 5, 6), tri):
        a[(3, leaf)] = c
    col = check_proper(g, a)
    copy = extract_rainbow_k5(g, col)
    assert copy.vertex_map == (0, 1, 2, 3, 7)
    assert is_rainbow(col, copy)


def test_k5_rejects_non_rainbow_hat():
    g = TildeK35().build()
    a = distinct(g)
    a[(0, 4)] = a[(1, 5)]
    with pytest.raises(GadgetStateError) as err:
        extract_rainbow_k5(g, check_proper(g, a))
    assert err.value.stage == "hat-rainbow"


def test_k5_random():
    rng = np.random.default_rng(11)
    for _ in range(200):
        col = random_tilde_coloring(rng)
        assert is_rainbow(col, extract_rainbow_k5(col.host, col))


# -- greedy interest / compatibility -------------------------------------------


def test_interest_all_distinct():
    g = HatK(3, 9).build()
    col = check_proper(g, distinct(g))
    assert greedy_interest_set(g, col) == tuple(range(3, 12))


def test_interest_adversarial_n10():
    # cyclic Latin square: leaf j sees colors j, j+1, j+2 (mod 10), so each admitted leaf blocks the next two
    g = HatK(3, 10).build()
    a = {(0, 1): 1, (0, 2): 2, (1, 2): 3}
    for j in range(10):
        for i in range(3):
            a[(i, 3 + j)] = 4 + (i + j) % 10
    out = greedy_interest_set(g, check_proper(g, a))
    assert out == (3, 6, 9)
    assert 7 * len(out) >= 10 - 3


def test_interest_needs_a_triangle():
    g = HatK(3, 4).build()
    col = check_proper(g, distinct(g))
    with pytest.raises(GadgetStateError):
        greedy_interest_set(g, col, triangle=(0, 3, 4))
    with pytest.raises(GadgetStateError):
        greedy_interest_set(g, col, candidates=[1, 3])


def _k4s_plus(n_extra: int) -> Graph:
    edges = [e for i in range(4) for e in itertools.combinations(range(4 * i, 4 * i + 4), 2)]
    edges += [(x, 16 + s) for x in range(16) for s in range(n_extra)]
    return Graph.from_edges(16 + n_extra, edges)


def test_compatible_disjoint_palettes():
    g = _k4s_plus(20)
    col = check_proper(g, distinct(g))
    blocks = [range(4 * i, 4 * i + 4) for i in range(4)]
    res = greedy_compatible_set(g, col, blocks)
    assert res.members == tuple(range(16, 36))
    assert res.bound(20) <= len(res.members)
    assert (COMPAT_C0, COMPAT_C1) == (336, 241)


def test_compatible_random_pairs_recheck():
    g = _k4s_plus(20)
    blocks = [range(4 * i, 4 * i + 4) for i in range(4)]
    rng = np.random.default_rng(2)
    for _ in range(20):
        col = random_proper_coloring(g, rng, palette=40)
        try:
            res = greedy_compatible_set(g, col, blocks)
        except GadgetStateError:
            continue
        anchors = [x for q in res.k_psi for x in q]
        k_colors = {col.assignment[e] for q in res.k_psi for e in itertools.combinations(q, 2)}
        for u in res.members:
            assert k_colors.isdisjoint(col.assignment[norm_edge(u, x)] for x in anchors)
        for u, v in itertools.combinations(res.members, 2):
            assert all(col.assignment[norm_edge(u, x)] != col.assignment[norm_edge(v, x)] for x in anchors)
            assert {col.assignment[norm_edge(u, x)] for x in anchors}.isdisjoint(
                col.assignment[norm_edge(v, x)] for x in anchors)


def test_compatible_empty_and_missing_k4():
    g = _k4s_plus(0)
    col = check_proper(g, distinct(g))
    blocks = [range(4 * i, 4 * i + 4) for i in range(4)]
    assert greedy_compatible_set(g, col, blocks).members == ()
    with pytest.raises(GadgetStateError):
        greedy_compatible_set(g, col, blocks[:3])


# -- matching removal -----------------------------------------------------------


def test_matching_removal_no_matchings():
    tri = matching_removal_triangle("Kdelta(2,3)", [])
    assert tri.vertex_map == (0, 1, triangle_star_apex(2, 3, 0, 0))


def test_matching_removal_single_edges():
    g = TriangleStar(2, 3).build()
    for e in g.edge_list:
        tri = matching_removal_triangle(TriangleStar(2, 3), [[e]])
        assert e not in tri.edges


def test_matching_removal_errors():
    with pytest.raises(ParameterError):
        matching_removal_triangle("Kdelta(2,3)", [[(0, 1), (0, 2)]])
    with pytest.raises(ParameterError):
        matching_removal_triangle("Kdelta(2,3)", [[(1, 2)]])
    star = [[(0, 1)], [(0, 2)]]
    with pytest.raises(InapplicableError):
        matching_removal_triangle("Kdelta(2,3)", star)


# -- K7 assembly -----------------------------------------------------------------


def _disjoint_k7(instance):
    return ProperColoring(instance.graph, distinct(instance.graph))


def test_k7_disjoint_palettes():
    inst = build_k7_instance(3, 5)
    copy = assemble_rainbow_k7(inst, _disjoint_k7(inst))
    assert copy.vertex_map[:4] == inst.cliques[0]
    assert copy.vertex_map[4:] == tuple(16 + v for v in (0, 1, triangle_star_apex(3, 5, 0, 0)))


def test_k7_adversarial_clash_forces_last_clique():
    inst = build_k7_instance(3, 5)
    a = distinct(inst.graph)
    s0, s1, s2 = (16 + v for v in (0, 1, triangle_star_apex(3, 5, 0, 0)))
    # each triangle edge reuses a cross color from one of the first three cliques
    a[(s1, s2)] = a[(0, s0)]
    a[(s0, s2)] = a[(4, s1)]
    a[(s0, s1)] = a[(8, s2)]
    col = check_proper(inst.graph, a)
    copy = assemble_rainbow_k7(inst, col)
    assert copy.vertex_map[:4] == inst.cliques[3]
    assert is_rainbow(col, copy)


def test_k7_stage_errors():
    inst = build_k7_instance(2, 3)
    a = distinct(inst.graph)
    a[(0, 1)] = a[(2, 3)]
    with pytest.raises(GadgetStateError) as err:
        assemble_rainbow_k7(inst, ProperColoring(inst.graph, a))
    assert err.value.stage == "k-psi"
    a = distinct(inst.graph)
    a[(0, 16)] = a[(4, 5)]
    with pytest.raises(GadgetStateError) as err:
        assemble_rainbow_k7(inst, ProperColoring(inst.graph, a))
    assert err.value.stage == "interest"
    a = distinct(inst.graph)
    a[(0, 16)] = a[(1, 17)]
    with pytest.raises(GadgetStateError) as err:
        assemble_rainbow_k7(inst, ProperColoring(inst.graph, a))
    assert err.value.stage == "compatibility"


def test_k7_random_small():
    inst = build_k7_instance(25, 49)
    rng = np.random.default_rng(4)
    for _ in range(10):
        col = random_k7_coloring(inst, rng)
        assert is_rainbow(col, assemble_rainbow_k7(inst, col))


# -- odd cycles --------------------------------------------------------------------


def test_triangle_through_side_edge():
    seed = build("Kb(2,2)")
    g = seed.with_edges([(0, 1)])
    rng = np.random.default_rng(0)
    for _ in range(10):
        col = random_proper_coloring(g, rng)
        cyc = greedy_rainbow_odd_cycle(g, (0, 1), col, 1)
        assert cyc is not None and len(cyc.edges) == 3 and is_rainbow(col, cyc)


def test_pentagon_through_side_edge():
    g = build("Kb(5,5)").with_edges([(0, 1)])
    col = check_proper(g, distinct(g))
    cyc = greedy_rainbow_odd_cycle(g, (0, 1), col, 2)
    assert cyc.vertex_map[:2] == (0, 1)
    assert is_rainbow(col, cyc) and len(cyc.edges) == 5
    sides = g.sides
    assert [sides[v] for v in cyc.vertex_map] == [0, 0, 1, 0, 1]


def test_no_odd_cycle():
    g = Graph.from_edges(4, [(0, 1), (2, 3)], sides=(0, 0, 1, 1))
    col = check_proper(g, distinct(g))
    assert greedy_rainbow_odd_cycle(g, (0, 1), col, 1) is None
    assert greedy_rainbow_odd_cycle(g, (0, 1), col, 2) is None


def test_odd_cycle_errors():
    g = build("Kb(2,2)").with_edges([(0, 1)])
    col = check_proper(g, distinct(g))
    with pytest.raises(ParameterError):
        greedy_rainbow_odd_cycle(g, (0, 2), col, 1)
    with pytest.raises(ParameterError):
        greedy_rainbow_odd_cycle(g, (0, 1), col, 0)

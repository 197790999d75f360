from __future__ import annotations

import networkx as nx
import pytest

from rainbowlab.graph import Graph

_CRITERIA: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    _CRITERIA.setdefault(marker.args[0], []).append("pass" if call.excinfo is None else "fail")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        outcomes = _CRITERIA[n]
        status = "PASS" if all(o == "pass" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {status} ({outcomes.count('pass')}/{len(outcomes)} checks)")


def to_graph(G: nx.Graph) -> Graph:
    mapping = {v: i for i, v in enumerate(G.nodes())}
    return Graph.from_edges(len(mapping), [(mapping[u], mapping[v]) for u, v in G.edges()])


def connected_graphs_up_to(max_edges: int) -> list[Graph]:
    """Every connected graph with 1..max_edges edges, up to isomorphism.

    The atlas covers all graphs on at most 7 vertices; a connected graph with
    at most 7 edges and 8 vertices is a tree, listed separately.
    """
    out = [to_graph(G) for G in nx.graph_atlas_g()[1:]
           if 0 < G.number_of_edges() <= max_edges and nx.is_connected(G)]
    for n in range(8, max_edges + 2):
        out.extend(to_graph(T) for T in nx.nonisomorphic_trees(n))
    return out


@pytest.fixture(scope="session")
def small_connected():
    return connected_graphs_up_to(7)

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from treescape.graph import (
    DegeneracyOrdering,
    Graph,
    GraphError,
    bfs_within,
    build_graph,
    compact_subgraph,
    connected_components,
    degeneracy_ordering,
    density_audit,
    induced_edge_count,
    is_connected_within,
    is_spanning_subgraph,
    masked_subgraph,
    max_codegree,
    parse_edge_list,
    read_edge_list,
    write_edge_list,
)


def k(n):
    return build_graph(n, [(a, b) for a in range(n) for b in range(a + 1, n)])


def path(n):
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def test_build_graph_dedups_and_sorts():
    g = build_graph(4, [(1, 0), (0, 1), (2, 3), (3, 2), (1, 3)])
    assert g.m == 3
    assert tuple(g.adj[1]) == (0, 3)
    assert g.has_edge(0, 1) and g.has_edge(1, 0)
    assert not g.has_edge(0, 2)


def test_build_graph_rejects_loops_and_range():
    with pytest.raises(GraphError):
        build_graph(3, [(1, 1)])
    with pytest.raises(GraphError):
        build_graph(3, [(0, 3)])


def test_degree_views():
    g = build_graph(5, [(0, 1), (0, 2), (0, 3), (1, 2)])
    assert g.degree(0) == 3
    assert g.max_degree() == 3
    assert g.min_degree() == 0          # vertex 4 is isolated
    assert g.min_degree(within=[0, 1, 2]) == 2
    assert g.support() == [0, 1, 2, 3]


def test_edges_iterates_each_once():
    g = k(5)
    es = list(g.edges())
    assert len(es) == 10 == g.m
    assert all(u < v for u, v in es)


def test_masked_subgraph_keeps_index_space():
    g = k(4)
    h = masked_subgraph(g, [0, 2, 3])
    assert h.n == 4
    assert len(h.adj[1]) == 0
    assert h.has_edge(2, 3) and not h.has_edge(0, 1)
    assert is_spanning_subgraph(h, g)


def test_compact_subgraph_relabels():
    g = path(6)
    h, old = compact_subgraph(g, [5, 3, 4])
    assert h.n == 3
    assert old == [3, 4, 5]
    assert h.has_edge(0, 1) and h.has_edge(1, 2) and not h.has_edge(0, 2)


def test_is_spanning_subgraph_rejects_extra_edges():
    g = path(4)
    j = build_graph(4, [(0, 2)])
    assert not is_spanning_subgraph(j, g)
    assert is_spanning_subgraph(build_graph(4, [(1, 2)]), g)
    assert not is_spanning_subgraph(build_graph(3, []), g)


def test_degeneracy_ordering_values():
    assert degeneracy_ordering(k(5)).degeneracy == 4
    assert degeneracy_ordering(path(7)).degeneracy == 1
    assert degeneracy_ordering(cycle(8)).degeneracy == 2
    assert degeneracy_ordering(build_graph(3, [])).degeneracy == 0


def test_degeneracy_ordering_is_a_valid_elimination():
    g = cycle(9)
    ordering = degeneracy_ordering(g)
    assert isinstance(ordering, DegeneracyOrdering)
    pos = ordering.position
    assert sorted(ordering.order) == list(range(g.n))
    for v in range(g.n):
        later = sum(1 for u in g.adj[v] if pos[u] > pos[v])
        assert later <= ordering.degeneracy


def test_bfs_within_radius_and_exclusion():
    g = path(8)
    assert bfs_within(g, [0], None, 2) == {0, 1, 2}
    # removing vertex 1 disconnects 0 from the rest
    assert bfs_within(g, [0], 1, 5) == {0}
    assert bfs_within(g, [3], None, 0) == {3}


def test_max_codegree():
    assert max_codegree(k(4)) == 2
    assert max_codegree(path(5)) == 1
    assert max_codegree(build_graph(2, [(0, 1)])) == 0


def test_connected_components():
    g = build_graph(7, [(0, 1), (1, 2), (4, 5)])
    comps = connected_components(g)
    assert sorted(map(sorted, comps)) == [[0, 1, 2], [3], [4, 5], [6]]
    assert is_connected_within(g, [0, 1, 2])
    assert not is_connected_within(g, [0, 2])  # 1 is the only bridge
    within = connected_components(g, within=[0, 2, 4, 5])
    assert sorted(map(sorted, within)) == [[0], [2], [4, 5]]


def test_induced_edge_count():
    g = k(5)
    assert induced_edge_count(g, [0, 1, 2]) == 3
    assert induced_edge_count(g, [4]) == 0


def test_density_audit_finds_k4_inside_sparse_padding():
    # K4 has average degree 3 > 12/5; the pendant path should not distract
    edges = [(a, b) for a in range(4) for b in range(a + 1, 4)]
    edges += [(3, 4), (4, 5), (5, 6)]
    g = build_graph(7, edges)
    w = density_audit(g, size_cap=4, threshold=Fraction(12, 5))
    assert w is not None
    assert set(w.vertices) == {0, 1, 2, 3}
    assert w.average_degree == 3
    w.check(g, Fraction(12, 5))


def test_density_audit_none_on_trees():
    g = path(30)
    assert density_audit(g, size_cap=10, threshold=Fraction(12, 5)) is None


def test_density_audit_exhaustive_on_small_graphs():
    # 14 vertices or fewer takes the subset-by-subset route.  Induced
    # subgraphs of a cycle are disjoint paths, so only the full cycle has
    # average degree 2 > 9/5; every proper subset stays at or below 9/5.
    g = cycle(9)
    assert density_audit(g, size_cap=9, threshold=Fraction(9, 5)) is not None
    assert density_audit(g, size_cap=8, threshold=Fraction(9, 5)) is None


def test_witness_check_rejects_wrong_claims():
    from treescape.graph import DensityWitness

    g = k(4)
    bad = DensityWitness(vertices=(0, 1, 2), edge_count=5, average_degree=Fraction(10, 3))
    with pytest.raises(GraphError):
        bad.check(g, Fraction(12, 5))


def test_edge_list_round_trip(tmp_path):
    g = build_graph(6, [(0, 5), (2, 3), (1, 4)])
    p = str(tmp_path / "g.edges")
    write_edge_list(g, p)
    h = read_edge_list(p)
    assert h.n == g.n and sorted(h.edges()) == sorted(g.edges())


def test_parse_edge_list_ignores_comments():
    g = parse_edge_list("# a graph\n3 2\n0 1\n\n1 2\n")
    assert g.n == 3 and g.m == 2
    with pytest.raises(GraphError):
        parse_edge_list("3 1\n0 1 2\n")
    with pytest.raises(GraphError):
        parse_edge_list("3 5\n0 1\n")


@given(st.integers(3, 24), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_random_graph_degeneracy_bounds(n, seed):
    import random

    rng = random.Random(seed)
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.3]
    g = build_graph(n, edges)
    ordering = degeneracy_ordering(g)
    # degeneracy is sandwiched between avg/2 and max degree
    assert ordering.degeneracy <= g.max_degree()
    if g.m:
        assert ordering.degeneracy >= math.ceil(g.m / g.n)


@given(st.integers(2, 16))
@settings(max_examples=20, deadline=None)
def test_compact_then_masked_agree_on_edges(n):
    g = cycle(n)
    keep = list(range(0, n, 2))
    h, old = compact_subgraph(g, keep)
    masked = masked_subgraph(g, keep)
    lifted = sorted((old[u], old[v]) for u, v in h.edges())
    assert lifted == sorted(masked.edges())

"""Tests for the brute-force oracles themselves.

The oracles exist to double-check the main algorithms, so the checks here
leap on facts that can be settled by hand: a triangle holds no induced
three-path, complete-graph overlay counts follow a closed form, boundary
ratios of K4 work out on paper.
"""

import math
from fractions import Fraction

import pytest

from treescape.escapeway import ArcSet, validate_escape_way
from treescape.graph import build_graph
from treescape.oracle import (
    BudgetExhausted,
    Embedding,
    OracleBudget,
    OracleError,
    brute_force_induced_embed,
    cheeger_small,
    enumerate_escape_ways,
)
from treescape.trees import path_tree, star_tree


def complete(n):
    return build_graph(n, [(a, b) for a in range(n) for b in range(a + 1, n)])


def cycle(n):
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def test_budget_validation():
    with pytest.raises(ValueError):
        OracleBudget(max_vertices=0)
    with pytest.raises(ValueError):
        OracleBudget(time_hint=0)


def test_no_induced_path_in_a_triangle():
    # any three distinct vertices of K3 are pairwise adjacent, so the two
    # path endpoints always pick up a forbidden host edge
    g = complete(3)
    assert brute_force_induced_embed(g, g, path_tree(3)) is None
    g4 = complete(4)
    assert brute_force_induced_embed(g4, g4, path_tree(3)) is None


def test_finds_an_induced_path_in_a_cycle():
    g = cycle(6)
    emb = brute_force_induced_embed(g, g, path_tree(4))
    assert emb is not None
    assert emb.check(g, g, path_tree(4)) == []


def test_finds_a_star_and_respects_the_subgraph():
    # g is K4 but j keeps only a star; tree edges must follow j
    g = complete(4)
    j = build_graph(4, [(0, 1), (0, 2), (0, 3)])
    emb = brute_force_induced_embed(g, j, path_tree(2))
    assert emb is not None
    u, v = emb.mapping
    assert j.has_edge(u, v)
    # a three-node path cannot avoid the K4 edges between its endpoints
    assert brute_force_induced_embed(g, j, star_tree(3)) is None


def test_budget_exhaustion_is_not_a_verdict():
    g = cycle(8)
    tight = OracleBudget(max_nodes_expanded=2)
    with pytest.raises(BudgetExhausted):
        brute_force_induced_embed(g, g, path_tree(4), tight)
    # the same search completes with the default budget
    assert brute_force_induced_embed(g, g, path_tree(4)) is not None


def test_oversized_trees_are_refused_up_front():
    g = cycle(8)
    small = OracleBudget(max_vertices=3)
    with pytest.raises(OracleError):
        brute_force_induced_embed(g, g, path_tree(4), small)


def test_embedding_check_reports_each_violation_kind():
    g = cycle(5)
    t = path_tree(3)
    assert Embedding((0,)).check(g, g, t) == ["mapping covers 1 of 3 nodes"]
    dup = Embedding((0, 1, 1)).check(g, g, t)
    assert any("not injective" in v for v in dup)
    torn = Embedding((0, 1, 3)).check(g, g, t)
    assert any("not a subgraph edge" in v for v in torn)
    # on a triangle the path endpoints land on a host edge
    g3 = complete(3)
    bent = Embedding((0, 1, 2)).check(g3, g3, t)
    assert any("map to a host edge" in v for v in bent)


def test_overlay_counts_match_the_closed_form_on_complete_graphs():
    # in-vertex sets of size k must be pairwise oriented with in-degree
    # exactly one, which caps k at 3: the empty overlay, single arcs,
    # oriented paths on two in-vertices, and directed triangles
    for n in range(1, 7):
        count, ways = enumerate_escape_ways(complete(n))
        formula = 1 + n * (n - 1) + n * (n - 1) * (n - 2) + 2 * math.comb(n, 3)
        assert count == formula
        assert len(ways) == count


def test_enumeration_agrees_with_the_validator():
    g = build_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)])
    count, ways = enumerate_escape_ways(g)
    for arcs in ways:
        validate_escape_way(g, ArcSet(g, list(arcs)))
    assert ((0, 1), (1, 0)) not in ways


def test_enumeration_refuses_large_graphs():
    with pytest.raises(OracleError):
        enumerate_escape_ways(cycle(7))


def test_cheeger_ratios_of_k4_by_hand():
    est = cheeger_small(complete(4), 2)
    # singletons send 3 edges out; pairs send 4 edges to 2 outside vertices
    assert est.edge_boundary_min_ratio == 2
    assert est.vertex_boundary_min_ratio == 1
    assert est.exact_flag is True
    assert est.subsets_checked == 4 + 6


def test_cheeger_flag_tracks_the_cap():
    est = cheeger_small(cycle(6), 2)
    assert est.exact_flag is False
    assert est.edge_boundary_min_ratio == 1  # adjacent pair: two boundary edges
    assert est.vertex_boundary_min_ratio == 1
    full = cheeger_small(cycle(6), 3)
    assert full.exact_flag is True
    # a three-arc of the cycle still has two boundary edges
    assert full.edge_boundary_min_ratio == Fraction(2, 3)


def test_cheeger_degenerate_cap():
    est = cheeger_small(cycle(5), 0)
    assert est.edge_boundary_min_ratio is None
    assert est.vertex_boundary_min_ratio is None
    assert est.subsets_checked == 0

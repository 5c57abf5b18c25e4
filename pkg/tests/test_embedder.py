"""Game-level tests: root setup, the two extension cases, rollback,
certificates, and full runs against every adversary policy.

The regular host keeps every vertex far below saturation, so reservation
rounds succeed with a handful of retries; criticality is pinned above the
maximum degree so no cascade can occur unless a test wants one.
"""

import math

import pytest

from treescape.adversaries import make_adversary
from treescape.embedder import (
    CascadeTooLarge,
    EmbedError,
    GameConfig,
    HypothesisRefused,
    InvalidRequest,
    NoAvailableExtension,
    ReservationFailed,
    paper_hypothesis_violations,
    run_game,
    start_game,
)
from treescape.experiments import random_regular
from treescape.graph import build_graph, masked_subgraph
from treescape.trees import path_tree, random_bounded_tree

REG = random_regular(2400, 14, seed=5)

K6_TAIL = build_graph(
    9,
    [(a, b) for a in range(6) for b in range(a + 1, 6)] + [(5, 6), (6, 7), (7, 8)],
)

P3 = build_graph(3, [(0, 1), (1, 2)])


def reg_config(**kw):
    base = dict(
        delta=3,
        mode="practical",
        d=REG.max_degree() + 1,
        seed=2,
        sample_prob=1 / 2,
        max_retries=64,
    )
    base.update(kw)
    return GameConfig(**base)


def grow_chain(state, length):
    """Extend a path from the root, returning the node ids in order."""
    ids = [0]
    for _ in range(length - 1):
        ids.append(state.extend_node(ids[-1]))
    return ids


def test_config_validation():
    with pytest.raises(InvalidRequest):
        GameConfig(delta=0)
    with pytest.raises(InvalidRequest):
        GameConfig(delta=3, mode="frantic")
    with pytest.raises(InvalidRequest):
        GameConfig(delta=3, d=0)
    with pytest.raises(InvalidRequest):
        GameConfig(delta=3, spot_check_every=0)


def test_start_game_shape():
    st = start_game(REG, REG, reg_config())
    g = st.g
    assert g.degree(st.root) == g.max_degree()
    assert st.tree_size == 1
    assert st.image_of == {0: st.root}
    assert st.crit.members == {st.root}
    # the reserve is an independent set inside the root neighborhood, and
    # with j == g everything else adjacent to the root is deleted
    reserve = st.root_reserve
    assert reserve and reserve <= set(g.adj[st.root])
    for u in reserve:
        for w in reserve:
            assert u == w or not g.has_edge(u, w)
    assert st.deleted == set(g.adj[st.root]) - reserve
    for v in st.deleted:
        assert any(g.has_edge(v, u) for u in reserve), "reserve is not maximal"
    assert st.bway.base.out_neighbors(st.root) == reserve
    assert st.events[0]["type"] == "init"
    st.check_invariants(full=True)


def test_start_game_rejects_bad_subgraphs():
    other = build_graph(5, [(0, 1)])
    with pytest.raises(InvalidRequest):
        start_game(REG, other, reg_config())
    empty = masked_subgraph(REG, set())
    with pytest.raises(InvalidRequest):
        start_game(REG, empty, reg_config())


def test_case1_hands_out_reserved_arcs():
    st = start_game(REG, REG, reg_config())
    nid = st.extend_node(0)
    ev = st.events[-1]
    assert ev["type"] == "extend" and ev["case"] == 1
    assert st.image_of[nid] == min(st.root_reserve)
    assert st.node_parent[nid] == 0
    assert st.tree_size == 2


def test_case2_reserves_for_a_fresh_vertex():
    st = start_game(REG, REG, reg_config())
    first = st.extend_node(0)
    x = st.image_of[first]
    assert x not in st.crit.members
    second = st.extend_node(first)
    ev = st.events[-1]
    assert ev["case"] == 2
    assert ev["cstar"] == 1, "with d above the maximum degree only x itself turns critical"
    assert ev["reserved_arcs"] >= st.config.delta - 1
    assert x in st.crit.members
    assert (x, st.image_of[second]) in st.bway.base
    st.check_invariants(full=True)


def test_extend_rejects_unknown_nodes_and_full_nodes():
    st = start_game(REG, REG, reg_config())
    with pytest.raises(InvalidRequest):
        st.extend_node(99)
    for _ in range(st.config.delta):
        st.extend_node(0)
    with pytest.raises(InvalidRequest):
        st.extend_node(0)

    # an internal node caps at delta - 1 children
    st2 = start_game(REG, REG, reg_config())
    mid = st2.extend_node(0)
    for _ in range(st2.config.delta - 1):
        st2.extend_node(mid)
    with pytest.raises(InvalidRequest):
        st2.extend_node(mid)


def test_no_available_extension_when_the_reserve_runs_dry():
    # path on three vertices: the root is the middle, reserve is both ends
    st = start_game(P3, P3, GameConfig(delta=3, seed=0))
    assert st.root == 1
    assert st.root_reserve == {0, 2}
    st.extend_node(0)
    st.extend_node(0)
    with pytest.raises(NoAvailableExtension):
        st.extend_node(0)


def test_reservation_failure_surfaces_the_best_attempt():
    st = start_game(P3, P3, GameConfig(delta=3, seed=0))
    leaf = st.extend_node(0)
    # the leaf image is a degree-1 endpoint whose only neighbor is already
    # closure-blocked, so no draw can ever meet a target of delta
    with pytest.raises(ReservationFailed) as exc:
        st.extend_node(leaf)
    assert exc.value.outcome is not None


def test_root_cascade_is_refused_with_a_witness():
    cfg = GameConfig(delta=3, d=2, seed=0)
    with pytest.raises(CascadeTooLarge) as exc:
        start_game(K6_TAIL, K6_TAIL, cfg)
    assert "cascades" in str(exc.value)
    w = exc.value.witness
    assert w is not None
    assert w.average_degree >= 2
    for u, v in w.edges:
        assert K6_TAIL.has_edge(u, v)


def test_rollback_round_trip():
    st = start_game(REG, REG, reg_config())
    ids = grow_chain(st, 8)
    removed = st.rollback_nodes(ids[4:])
    assert removed == sorted(ids[4:])
    assert st.tree_size == 4
    # criticality is recomputed from the survivors' internal vertices only
    assert st.crit.members == {st.image_of[i] for i in ids[:3]}
    assert st.events[-1]["type"] == "rollback"
    assert st.events[-1]["removed"] == removed
    assert st.bway.base.out_neighbors(st.root) == st.root_reserve

    again = st.extend_node(ids[3])
    assert st.tree_size == 5
    cert = st.verify_induced()
    assert cert.ok
    assert again in st.image_of


def test_rollback_validation():
    st = start_game(REG, REG, reg_config())
    ids = grow_chain(st, 6)
    with pytest.raises(InvalidRequest):
        st.rollback_nodes([])
    with pytest.raises(InvalidRequest):
        st.rollback_nodes([0])
    with pytest.raises(InvalidRequest):
        st.rollback_nodes([404])
    with pytest.raises(InvalidRequest) as exc:
        st.rollback_nodes([ids[3]])
    assert "subtree-closed" in str(exc.value)
    removed = st.rollback_nodes([ids[3]], auto_expand=True)
    assert removed == sorted(ids[3:])
    assert st.tree_size == 3


def test_rollback_auto_expand_from_config():
    st = start_game(REG, REG, reg_config(auto_expand_rollback=True))
    ids = grow_chain(st, 5)
    removed = st.rollback_nodes([ids[2]])
    assert removed == sorted(ids[2:])


def test_certificate_counts_every_pair():
    st = start_game(REG, REG, reg_config())
    grow_chain(st, 10)
    cert = st.verify_induced()
    assert cert.ok
    assert cert.violations == ()
    assert cert.tree_nodes == 10
    assert cert.tree_edges_checked == 9
    assert cert.non_adjacent_pairs_checked == math.comb(10, 2) - 9


def test_certificate_catches_a_broken_tree_edge():
    st = start_game(REG, REG, reg_config())
    ids = grow_chain(st, 6)
    leaf = ids[-1]
    parent_img = st.image_of[st.node_parent[leaf]]
    used = set(st.image_of.values())
    far = next(
        v for v in range(st.g.n)
        if v not in used and not st.g.has_edge(v, parent_img)
    )
    st.image_of[leaf] = far
    cert = st.verify_induced()
    assert not cert.ok
    assert any("outside the subgraph" in v for v in cert.violations)


def test_certificate_catches_duplicate_images():
    st = start_game(REG, REG, reg_config())
    ids = grow_chain(st, 6)
    st.image_of[ids[-1]] = st.image_of[ids[0]]
    cert = st.verify_induced()
    assert not cert.ok
    assert any("not distinct" in v for v in cert.violations)


@pytest.mark.parametrize("policy", ["bfs", "dfs", "random", "hostile"])
def test_run_game_succeeds_against_every_policy(policy):
    spec = random_bounded_tree(40, 3, seed=11)
    adv = make_adversary(policy, spec, seed=7)
    res = run_game(REG, REG, reg_config(seed=9), adv, 40)
    assert res.error is None
    assert res.success
    assert res.state.tree_size == 40
    assert res.certificate is not None and res.certificate.ok
    assert res.certificate.tree_nodes == 40
    kinds = [e["type"] for e in res.events]
    assert kinds[0] == "init" and kinds.count("extend") == 39


def test_run_game_is_deterministic():
    spec = random_bounded_tree(25, 3, seed=4)

    def play():
        adv = make_adversary("random", spec, seed=13)
        return run_game(REG, REG, reg_config(seed=21), adv, 25)

    a, b = play(), play()
    assert a.success and b.success
    assert a.events == b.events
    assert a.state.image_of == b.state.image_of
    assert sorted(a.state.bway.base.arcs()) == sorted(b.state.bway.base.arcs())


def test_run_game_captures_a_start_failure():
    spec = path_tree(4)
    adv = make_adversary("bfs", spec)
    res = run_game(K6_TAIL, K6_TAIL, GameConfig(delta=3, d=2), adv, 4)
    assert not res.success
    assert res.state is None
    assert isinstance(res.error, CascadeTooLarge)
    assert res.error_step == 0
    assert res.events == []
    assert res.certificate is None


def test_run_game_captures_a_mid_game_failure():
    spec = path_tree(4)
    adv = make_adversary("bfs", spec)
    res = run_game(P3, P3, GameConfig(delta=3, seed=0), adv, 4)
    assert not res.success
    assert res.state is not None
    assert isinstance(res.error, EmbedError)
    assert res.error_step == res.state.step
    assert res.certificate is None


def test_paper_mode_refuses_small_hosts_by_name():
    spec = path_tree(5)
    adv = make_adversary("bfs", spec)
    cfg = GameConfig(delta=3, mode="paper")
    with pytest.raises(HypothesisRefused) as exc:
        run_game(REG, REG, cfg, adv, 5)
    assert exc.value.hypothesis == "minimum degree"


def test_paper_hypothesis_names_come_in_check_order():
    k20 = build_graph(20, [(a, b) for a in range(20) for b in range(a + 1, 20)])
    viols = paper_hypothesis_violations(k20, k20, 3, target_n=20)
    names = [v.split(":")[0] for v in viols]
    assert names == ["minimum degree", "maximum degree", "density audit"]


def test_game_view_is_a_faithful_window():
    st = start_game(REG, REG, reg_config())
    v = st.view()
    assert v.g is REG
    assert v.delta == 3
    assert v.tree_size == 1
    assert v.nodes() == [0]
    assert v.image(0) == st.root
    assert v.critical_members == frozenset({st.root})
    nid = st.extend_node(0)
    assert v.tree_size == 2
    assert v.nodes() == [0, nid]

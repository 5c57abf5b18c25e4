"""The pre-emptive embedding game.

Grows a bounded-degree tree one leaf at a time inside a host graph g,
with tree edges drawn from a spanning subgraph j, so that the finished
tree is an induced subgraph of g.  An adversary picks which tree node
to extend next; the algorithm answers by attaching a host vertex, and
it protects future answers by reserving vertices ahead of time.

The machinery it maintains:

* an escape-way B on g whose arcs mark reservations (arc (u, v) means
  v is held for u and nobody else may claim it);
* the d-critical set C of the images of internal tree nodes, grown by
  distance-2 bootstrap percolation in g;
* the closure K(B), against which availability is measured.

Extending from a vertex already in C consumes a reserved arc (Case 1).
Extending from a fresh vertex first percolates criticality, pads every
newly critical vertex with up to d available j-neighbors, and runs the
randomized reservation on the induced patch so every newly critical
vertex secures delta out-arcs before the leaf is attached (Case 2).

Rollback deletes a subtree-closed set of non-root nodes, recomputes
criticality from the surviving internal nodes, and keeps exactly the
arcs whose tails are still critical; the invariants survive because
tails keep all their arcs and every in-arc of a surviving head has a
surviving tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .adversaries import Adversary, Extend, Rollback
from .critical import (
    CriticalSetError,
    CriticalState,
    critical_set,
    density_witness,
    extend_critical,
)
from .escapeway import (
    ArcSet,
    EscapeWay,
    agrees,
    available_neighbors_in,
    closure_K,
    union_escape_ways,
    validate_escape_way,
)
from .graph import Graph, compact_subgraph, density_audit, is_spanning_subgraph, masked_subgraph
from .reservation import (
    DegeneracyCapExceeded,
    ReservationParams,
    TargetUnreachable,
    reserve,
)


class EmbedError(RuntimeError):
    pass


class HypothesisRefused(EmbedError):
    """Raised in paper mode when the host fails a stated hypothesis."""

    def __init__(self, hypothesis: str, detail: str):
        self.hypothesis = hypothesis
        super().__init__(f"hypothesis violated: {hypothesis} ({detail})")


class CascadeTooLarge(EmbedError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class ReservationFailed(EmbedError):
    def __init__(self, message: str, outcome=None):
        self.outcome = outcome
        super().__init__(message)


class NoAvailableExtension(EmbedError):
    pass


class InvalidRequest(EmbedError):
    pass


@dataclass(frozen=True)
class GameConfig:
    """Knobs of one game.  Practical mode runs on desk-scale hosts; paper
    mode enforces the literal hypotheses and refuses hosts that miss them."""

    delta: int
    mode: str = "practical"
    d: Optional[int] = None              # criticality threshold; mode default if None
    degeneracy_cap: int = 3
    sample_prob: Optional[float] = None  # None = 1 / cap^2
    max_retries: int = 64
    seed: int = 0
    spot_check_every: int = 64
    auto_expand_rollback: bool = False

    def __post_init__(self):
        if self.delta < 1:
            raise InvalidRequest("delta must be >= 1")
        if self.mode not in ("practical", "paper"):
            raise InvalidRequest(f"unknown mode {self.mode!r}")
        if self.d is not None and self.d < 1:
            raise InvalidRequest("criticality threshold d must be >= 1")
        if self.spot_check_every < 1:
            raise InvalidRequest("spot_check_every must be >= 1")


def paper_hypothesis_violations(g: Graph, j: Graph, delta: int,
                                target_n: int, audit_cap: Optional[int] = None) -> List[str]:
    """Named violations of the literal hypotheses, in check order.

    Checks: minimum degree of j (over its support) >= 10^7 * delta;
    maximum degree of g <= exp(dmin / 10^9); no subgraph on at most
    (10^7 delta + 1) * target_n vertices with average degree above 12/5.
    """
    out: List[str] = []
    support = j.support()
    dmin = min((j.degree(v) for v in support), default=0)
    need = 10 ** 7 * delta
    if dmin < need:
        out.append(
            f"minimum degree: subgraph minimum degree {dmin} is below 10^7*delta = {need}"
        )
    if g.max_degree() >= 2 and math.log(g.max_degree()) > dmin / 10 ** 9:
        out.append(
            f"maximum degree: host maximum degree {g.max_degree()} exceeds exp(dmin/10^9)"
        )
    cap = audit_cap if audit_cap is not None else min(g.n, (need + 1) * target_n)
    witness = density_audit(g, cap, Fraction(12, 5))
    if witness is not None:
        out.append(
            f"density audit: {len(witness.vertices)} vertices span {witness.edge_count} edges, "
            f"average degree {witness.average_degree} above 12/5"
        )
    return out


@dataclass(frozen=True)
class InducednessCertificate:
    tree_nodes: int
    tree_edges_checked: int
    non_adjacent_pairs_checked: int
    violations: Tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


class GameView:
    """Read-only facade handed to adversaries each round."""

    def __init__(self, state: "EmbedState"):
        self._state = state

    @property
    def g(self) -> Graph:
        return self._state.g

    @property
    def delta(self) -> int:
        return self._state.config.delta

    @property
    def tree_size(self) -> int:
        return len(self._state.image_of)

    @property
    def critical_members(self) -> FrozenSet[int]:
        return frozenset(self._state.crit.members)

    def image(self, node: int) -> int:
        return self._state.image_of[node]

    def nodes(self) -> List[int]:
        return sorted(self._state.image_of)


class EmbedState:
    """Mutable game state.  Build with start_game; drive with extend_node
    and rollback_nodes; check the finished embedding with verify_induced."""

    def __init__(self, g: Graph, j: Graph, j_eff: Graph, config: GameConfig,
                 d: int, root: int, root_reserve: FrozenSet[int],
                 deleted: FrozenSet[int], bway: EscapeWay, crit: CriticalState):
        self.g = g
        self.j = j
        self.j_eff = j_eff
        self.config = config
        self.d = d
        self.root = root
        self.root_reserve = root_reserve
        self.deleted = deleted
        self.bway = bway
        self.crit = crit
        self.image_of: Dict[int, int] = {0: root}
        self.node_parent: Dict[int, int] = {0: -1}
        self.node_children: Dict[int, List[int]] = {0: []}
        self.node_at: Dict[int, int] = {root: 0}
        self.step = 0
        self._next_id = 1
        self.events: List[dict] = []
        self._closure_arcs: Set[Tuple[int, int]] = set(closure_K(g, bway.base).arcs())
        self._closure_view = ArcSet(g, self._closure_arcs)

    # -- views ---------------------------------------------------------------

    def view(self) -> GameView:
        return GameView(self)

    @property
    def tree_size(self) -> int:
        return len(self.image_of)

    def internal_images(self) -> Set[int]:
        x = {self.root}
        for node, kids in self.node_children.items():
            if kids:
                x.add(self.image_of[node])
        return x

    # -- invariants ----------------------------------------------------------

    def check_invariants(self, full: bool = False) -> None:
        b = self.bway.base
        for node, par in self.node_parent.items():
            if par < 0:
                continue
            arc = (self.image_of[par], self.image_of[node])
            assert arc in b, f"tree arc {arc} missing from the escape-way"
        live_crit = self.crit.members - self.deleted
        assert b.v_out() == live_crit, (
            f"arc tails {sorted(b.v_out())} != live critical set {sorted(live_crit)}"
        )
        floor = self.config.delta - 1
        for v in live_crit:
            if v == self.root:
                assert b.out_neighbors(v) == self.root_reserve, "root reserve drifted"
            else:
                got = len(b.out_neighbors(v))
                assert got >= floor, f"critical vertex {v} holds {got} arcs < delta-1"
        if full:
            fresh = set(closure_K(self.g, b).arcs())
            assert fresh == self._closure_arcs, "incremental closure drifted from recompute"

    # -- closure upkeep --------------------------------------------------------

    def _add_closure_arcs(self, arcs: Sequence[Tuple[int, int]]) -> None:
        ca = self._closure_arcs
        for u, v in arcs:
            ca.add((u, v))
            for w in self.g.adj[v]:
                if w != u:
                    ca.add((v, w))
        self._closure_view = ArcSet(self.g, ca)

    def _rebuild_closure(self) -> None:
        self._closure_arcs = set(closure_K(self.g, self.bway.base).arcs())
        self._closure_view = ArcSet(self.g, self._closure_arcs)

    # -- requests --------------------------------------------------------------

    def extend_node(self, node: int) -> int:
        """Attach a new leaf under `node`; returns the new node id."""
        self.step += 1
        if node not in self.image_of:
            raise InvalidRequest(f"no tree node {node}")
        cap = self.config.delta if node == 0 else self.config.delta - 1
        if len(self.node_children[node]) >= cap:
            raise InvalidRequest(
                f"node {node} already has tree degree {self.config.delta}"
            )
        x = self.image_of[node]
        if x in self.crit:
            y, case, extras = self._case_reserved(node, x)
        else:
            y, case, extras = self._case_fresh(node, x)

        assert y not in self.node_at, f"head {y} is already the image of a tree node"
        assert self.j_eff.has_edge(x, y), f"attach edge {x}-{y} left the subgraph"
        new_id = self._next_id
        self._next_id += 1
        self.image_of[new_id] = y
        self.node_parent[new_id] = node
        self.node_children[new_id] = []
        self.node_children[node].append(new_id)
        self.node_at[y] = new_id
        self.events.append({
            "step": self.step, "type": "extend", "case": case, "node": node,
            "image": x, "new_node": new_id, "new_image": y, **extras,
        })
        self.check_invariants(full=(self.step % self.config.spot_check_every == 0))
        return new_id

    def _case_reserved(self, node: int, x: int) -> Tuple[int, int, dict]:
        taken = {self.image_of[c] for c in self.node_children[node]}
        cands = [
            y for y in self.bway.base.out_neighbors(x)
            if y not in taken and y not in self.deleted and y not in self.node_at
        ]
        if not cands:
            raise NoAvailableExtension(
                f"vertex {x} is critical with no unclaimed reserved neighbor"
            )
        return min(cands), 1, {}

    def _case_fresh(self, node: int, x: int) -> Tuple[int, int, dict]:
        assert x not in self.deleted, "a tree image can never be a deleted vertex"
        extended = extend_critical(self.crit, [x])
        cstar = sorted(extended.members - self.crit.members)
        assert x in cstar
        xset = self.internal_images() | {x}
        if len(cstar) > len(xset):
            witness = None
            try:
                witness = density_witness(self.g, sorted(xset), self.d)
            except (CriticalSetError, AssertionError):
                pass
            raise CascadeTooLarge(
                f"criticality cascade of {len(cstar)} vertices exceeds |X|={len(xset)}",
                witness=witness,
            )
        live_star = [v for v in cstar if v not in self.deleted]
        cplus = set(live_star)
        for v in live_star:
            pad = sorted(available_neighbors_in(self.g, self.j_eff, self._closure_view, v))
            cplus.update(pad[: self.d])
        order = sorted(cplus)
        f_c, old = compact_subgraph(self.g, order)
        j_c, old_j = compact_subgraph(self.j_eff, order)
        assert old == old_j
        pos = {v: i for i, v in enumerate(old)}
        h_arcs = [
            (pos[u], pos[v]) for (u, v) in self._closure_arcs
            if u in pos and v in pos
        ]
        forb = frozenset(
            pos[v] for v in order
            if any(t not in cplus for t in self._closure_view.in_neighbors(v))
        )
        live_pos = frozenset(pos[v] for v in live_star)
        delta = self.config.delta

        def tgt(vc: int, avail: int, _live=live_pos, _need=delta) -> int:
            return _need if vc in _live else 0

        params = ReservationParams(
            degeneracy_cap=self.config.degeneracy_cap,
            sample_prob=self.config.sample_prob,
            target=tgt,
            max_retries=self.config.max_retries,
            rng_seed=self.config.seed * 1_000_003 + self.step,
        )
        try:
            outcome = reserve(f_c, j_c, ArcSet(f_c, h_arcs), params, forbidden_in=forb)
        except DegeneracyCapExceeded as e:
            raise ReservationFailed(f"reservation patch too dense: {e}") from e
        except TargetUnreachable as e:
            raise ReservationFailed(str(e), outcome=e.outcome) from e

        live_set = set(live_star)
        new_arcs = [
            (old[a], old[b]) for (a, b) in outcome.escape_way.base.arcs()
            if old[a] in live_set
        ]
        iprime = validate_escape_way(self.g, ArcSet(self.g, new_arcs))
        assert agrees(iprime, self._closure_view), "reserved arcs disagree with the closure"
        self.bway = union_escape_ways(self.g, self.bway, iprime)
        self._add_closure_arcs(new_arcs)
        self.crit = extended

        mine = sorted(b for (a, b) in new_arcs if a == x)
        assert mine, f"vertex {x} ended its own reservation round empty-handed"
        return mine[0], 2, {
            "cstar": len(cstar),
            "patch": len(order),
            "reserved_arcs": len(new_arcs),
            "retries": outcome.retries_used,
        }

    def rollback_nodes(self, nodes: Sequence[int],
                       auto_expand: Optional[bool] = None) -> List[int]:
        """Delete tree nodes (subtree-closed; never the root).  Returns the
        ids actually removed, descendants included when auto-expanding."""
        self.step += 1
        req = set(nodes)
        if not req:
            raise InvalidRequest("rollback of nothing")
        if 0 in req:
            raise InvalidRequest("cannot roll back the root")
        unknown = [v for v in req if v not in self.image_of]
        if unknown:
            raise InvalidRequest(f"no tree nodes {sorted(unknown)}")
        closed = set(req)
        frontier = list(req)
        while frontier:
            v = frontier.pop()
            for c in self.node_children[v]:
                if c not in closed:
                    closed.add(c)
                    frontier.append(c)
        expand = self.config.auto_expand_rollback if auto_expand is None else auto_expand
        if closed != req and not expand:
            raise InvalidRequest(
                f"rollback set is not subtree-closed; missing {sorted(closed - req)}"
            )

        for v in closed:
            img = self.image_of.pop(v)
            del self.node_at[img]
            del self.node_children[v]
            del self.node_parent[v]
        for v, kids in self.node_children.items():
            self.node_children[v] = [c for c in kids if c not in closed]

        seeds = sorted(self.internal_images())
        self.crit = critical_set(self.g, seeds, self.d)
        keep_tails = self.crit.members - self.deleted
        kept = [(u, v) for (u, v) in self.bway.base.arcs() if u in keep_tails]
        self.bway = validate_escape_way(self.g, ArcSet(self.g, kept))
        self._rebuild_closure()
        self.events.append({
            "step": self.step, "type": "rollback",
            "removed": sorted(closed), "arcs_kept": len(kept),
        })
        self.check_invariants(full=True)
        return sorted(closed)

    # -- verification ----------------------------------------------------------

    def verify_induced(self) -> InducednessCertificate:
        nodes = sorted(self.image_of)
        images = [self.image_of[v] for v in nodes]
        violations: List[str] = []
        if len(set(images)) != len(images):
            violations.append("images are not distinct")
        tree_pairs = 0
        non_pairs = 0
        edges = {
            (min(v, self.node_parent[v]), max(v, self.node_parent[v]))
            for v in nodes if self.node_parent[v] >= 0
        }
        for i, a in enumerate(nodes):
            for b in nodes[i + 1:]:
                xa, xb = self.image_of[a], self.image_of[b]
                if (min(a, b), max(a, b)) in edges:
                    tree_pairs += 1
                    if not self.j_eff.has_edge(xa, xb):
                        violations.append(f"tree edge {a}-{b} maps outside the subgraph")
                else:
                    non_pairs += 1
                    if self.g.has_edge(xa, xb):
                        violations.append(
                            f"host edge {xa}-{xb} joins non-adjacent nodes {a} and {b}"
                        )
        return InducednessCertificate(
            tree_nodes=len(nodes),
            tree_edges_checked=tree_pairs,
            non_adjacent_pairs_checked=non_pairs,
            violations=tuple(violations),
        )


def start_game(g: Graph, j: Graph, config: GameConfig) -> EmbedState:
    """Initialize a game: pick the root, trim its neighborhood, seed the
    escape-way and the critical set, and verify the starting invariants."""
    if not is_spanning_subgraph(j, g):
        raise InvalidRequest("j must be a spanning subgraph of g")
    support = j.support()
    if not support:
        raise InvalidRequest("subgraph j has no edges to embed into")

    if config.mode == "paper":
        viols = paper_hypothesis_violations(g, j, config.delta, target_n=g.n)
        if viols:
            raise HypothesisRefused(viols[0].split(":")[0], viols[0])

    dmin = min(j.degree(v) for v in support)
    if config.d is not None:
        d = config.d
    elif config.mode == "paper":
        d = dmin
    else:
        d = max(8, dmin // 4)

    best = max(support, key=lambda v: (j.degree(v), -v))
    root = best

    # keep an independent set of root neighbors, favoring subgraph edges;
    # everything else adjacent to the root leaves the subgraph for good
    ranked = sorted(g.adj[root], key=lambda u: (0 if j.has_edge(root, u) else 1, u))
    reserve_set: List[int] = []
    for u in ranked:
        if all(not g.has_edge(u, s) for s in reserve_set):
            reserve_set.append(u)
    kept_children = [u for u in reserve_set if j.has_edge(root, u)]
    if not kept_children:
        raise NoAvailableExtension(f"root {root} keeps no subgraph neighbors")
    deleted = frozenset(set(g.adj[root]) - set(kept_children))
    j_eff = masked_subgraph(j, set(range(g.n)) - deleted)

    bway = validate_escape_way(g, ArcSet(g, [(root, u) for u in reserve_set]))
    crit = critical_set(g, [root], d)
    if len(crit) != 1:
        witness = None
        try:
            witness = density_witness(g, [root], d)
        except (CriticalSetError, AssertionError):
            pass
        raise CascadeTooLarge(
            f"the root alone cascades to {len(crit)} critical vertices", witness=witness
        )

    state = EmbedState(
        g=g, j=j, j_eff=j_eff, config=config, d=d, root=root,
        root_reserve=frozenset(reserve_set), deleted=deleted,
        bway=bway, crit=crit,
    )
    state.events.append({
        "step": 0, "type": "init", "root": root, "d": d,
        "root_reserve": len(reserve_set), "deleted": len(deleted),
    })
    state.check_invariants(full=True)
    return state


@dataclass
class GameResult:
    success: bool
    state: Optional[EmbedState]
    target_n: int
    error: Optional[EmbedError]
    error_step: Optional[int]
    events: List[dict]
    certificate: Optional[InducednessCertificate]


def run_game(g: Graph, j: Graph, config: GameConfig, adversary: Adversary,
             target_n: int) -> GameResult:
    """Drive a game to target_n tree nodes against the given adversary.

    Hypothesis refusals propagate (they are a verdict on the host, not a
    game outcome); every other game error is captured in the result along
    with the event log.  A successful result always carries an inducedness
    certificate, and success requires that certificate to pass.
    """
    try:
        state = start_game(g, j, config)
    except HypothesisRefused:
        raise
    except EmbedError as e:
        return GameResult(False, None, target_n, e, 0, [], None)

    error: Optional[EmbedError] = None
    while state.tree_size < target_n:
        req = adversary.next_request(state.view())
        if req is None:
            break
        try:
            if isinstance(req, Extend):
                new_id = state.extend_node(req.node)
                adversary.observe_extend(req.node, new_id)
            elif isinstance(req, Rollback):
                removed = state.rollback_nodes(req.nodes)
                adversary.observe_rollback(removed)
            else:
                raise InvalidRequest(f"unknown request {req!r}")
        except EmbedError as e:
            error = e
            break

    certificate = None
    success = False
    if error is None and state.tree_size >= target_n:
        certificate = state.verify_induced()
        success = certificate.ok
    return GameResult(
        success=success,
        state=state,
        target_n=target_n,
        error=error,
        error_step=state.step if error is not None else None,
        events=state.events,
        certificate=certificate,
    )

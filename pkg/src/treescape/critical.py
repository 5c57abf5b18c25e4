"""Distance-2 bootstrap percolation and the density dividend of large cascades.

A vertex v joins the *d-critical set* of a seed set X when at least d of its
neighbors lie within distance 2 of the current set in g minus v (members of
the set count as distance 0).  Additions happen one vertex at a time,
smallest index first; the terminal set C(X) does not depend on that order.

Two structural facts drive the embedding game:

* available-bound: if an escape-way's arc tails all lie inside C(X), then
  every vertex outside C(X) keeps at least deg(v) - d available neighbors
  with respect to the closure of the escape-way;
* density dividend: if g[X] is connected and the cascade reaches 2|X|
  vertices, the percolation trace can be compressed into a witness subgraph
  on at most (2d+2)|X| vertices with average degree >= 2 + (d-2)/(2d+2).
  Hosts without such dense spots therefore keep every cascade small.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .escapeway import ArcSet, EscapeWay, available_neighbors, closure_K
from .graph import Graph, bfs_within, is_connected_within


class CriticalSetError(ValueError):
    pass


@dataclass
class CriticalState:
    """Terminal percolation state plus the trace needed to replay it."""

    g: Graph
    d: int
    members: set[int]
    seeds: set[int]
    log: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)
    _cnt: list[int] = field(default_factory=list, repr=False)   # |N(v) & members| per vertex
    _pool: set[int] = field(default_factory=set, repr=False)    # candidates worth re-checking
    _growable: Optional[bool] = field(default=None, repr=False)  # any vertex of degree >= d?

    def __contains__(self, v: int) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.members)

    def copy(self) -> "CriticalState":
        return CriticalState(
            self.g, self.d, set(self.members), set(self.seeds),
            list(self.log), list(self._cnt), set(self._pool), self._growable,
        )

    # -- rule evaluation ---------------------------------------------------

    def _near(self, u: int, v: int) -> bool:
        """Is u within distance 2 of the members in g minus v?  (u is a neighbor of v.)"""
        if u in self.members or self._cnt[u] > 0:
            return True
        cnt = self._cnt
        for z in self.g.adj[u]:
            if z != v and cnt[z] > 0:
                return True
        return False

    def _qualifies(self, v: int) -> bool:
        need = self.d
        adj = self.g.adj[v]
        remaining = len(adj)
        hits = 0
        for u in adj:
            if remaining < need - hits:
                return False
            remaining -= 1
            if self._near(u, v):
                hits += 1
                if hits >= need:
                    return True
        return False

    def trigger_set(self, v: int) -> tuple[int, ...]:
        """All neighbors of v currently within distance 2 of the members in g minus v."""
        return tuple(u for u in self.g.adj[v] if self._near(u, v))

    # -- growth ------------------------------------------------------------

    def _eligible(self, v: int) -> bool:
        return v not in self.members and self.g.degree(v) >= self.d

    def _absorb(self, w: int, triggers: Optional[tuple[int, ...]]) -> None:
        self.members.add(w)
        self._pool.discard(w)
        for u in self.g.adj[w]:
            self._cnt[u] += 1
        if triggers is not None:
            self.log.append((w, triggers))
        if self._growable is None:
            self._growable = any(len(a) >= self.d for a in self.g.adj)
        if not self._growable:
            return    # nothing in the graph can ever qualify; skip pool upkeep
        for v in bfs_within(self.g, [w], None, 3):
            if self._eligible(v):
                self._pool.add(v)

    def _run(self) -> None:
        while True:
            chosen = None
            stale = []
            for v in sorted(self._pool):
                if v in self.members:
                    stale.append(v)
                elif self._qualifies(v):
                    chosen = v
                    break
                else:
                    stale.append(v)
            self._pool.difference_update(stale)
            if chosen is None:
                return
            triggers = self.trigger_set(chosen)
            assert len(triggers) >= self.d
            self._absorb(chosen, triggers)


def critical_set(g: Graph, x: Iterable[int], d: int) -> CriticalState:
    """Terminal d-critical set of the seed set x, with its addition log."""
    seeds = set(x)
    if d < 1:
        raise CriticalSetError("criticality threshold d must be >= 1")
    for s in seeds:
        if not (0 <= s < g.n):
            raise CriticalSetError(f"seed {s} out of range")
    state = CriticalState(g, d, set(), set(seeds), [], [0] * g.n, set())
    for s in sorted(seeds):
        state._absorb(s, None)
    state._run()
    return state


def extend_critical(state: CriticalState, new_seeds: Iterable[int]) -> CriticalState:
    """Terminal set after seeding more vertices: equals critical_set(g, X + new, d)."""
    out = state.copy()
    fresh = [s for s in sorted(set(new_seeds)) if s not in out.members]
    out.seeds.update(new_seeds)
    for s in fresh:
        if not (0 <= s < out.g.n):
            raise CriticalSetError(f"seed {s} out of range")
        out._absorb(s, None)
    out._run()
    return out


# --- the available-neighbor dividend ---------------------------------------

@dataclass(frozen=True)
class AvailableBoundReport:
    checked: int
    violations: tuple[tuple[int, int, int], ...]   # (vertex, available, degree)

    @property
    def ok(self) -> bool:
        return not self.violations


def assert_available_bound(g: Graph, crit: CriticalState, b: ArcSet | EscapeWay) -> AvailableBoundReport:
    """Check |A_{K(b)}(v)| >= deg(v) - d for every v outside the critical set.

    Requires every arc tail of b to lie inside the critical set; a reported
    violation indicates an implementation bug, the bound is unconditional.
    """
    base = b.base if isinstance(b, EscapeWay) else b
    outside_tails = base.v_out() - crit.members
    if outside_tails:
        raise CriticalSetError(
            f"arc tails {sorted(outside_tails)} are not in the critical set"
        )
    k = closure_K(g, b)
    violations = []
    checked = 0
    for v in range(g.n):
        if v in crit.members:
            continue
        checked += 1
        avail = len(available_neighbors(g, k, v))
        if avail < g.degree(v) - crit.d:
            violations.append((v, avail, g.degree(v)))
    return AvailableBoundReport(checked, tuple(violations))


# --- density witness from a large cascade -----------------------------------

@dataclass(frozen=True)
class PercolationWitness:
    """Dense subgraph distilled from a cascade trace."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    average_degree: Fraction
    seed_count: int
    groups: dict


def _supported(adj: dict[int, set[int]], rank: dict[int, int],
               pairs: list[tuple[int, int, int]]) -> bool:
    """Can the logged percolation replay inside the candidate edge set?

    pairs holds (j, v_j, w): trigger w of the j-th addition must lie within
    distance 2 of the rank-(j-1) prefix in the candidate graph minus v_j.
    """
    for j, vj, w in pairs:
        if w not in adj.get(vj, ()):  # trigger edge itself
            return False
        if rank.get(w, 1 << 30) <= j - 1:
            continue
        ok = False
        for z in adj.get(w, ()):
            if rank.get(z, 1 << 30) <= j - 1:
                ok = True
                break
            if z != vj and any(rank.get(c, 1 << 30) <= j - 1 for c in adj.get(z, ())):
                ok = True
                break
        if not ok:
            return False
    return True


def density_witness(g: Graph, x: Iterable[int], d: int) -> PercolationWitness:
    """Compress a cascade of size >= 2|x| into a small dense subgraph.

    Preconditions: d >= 2, g[x] connected, and |C(x)| >= 2|x|.  The returned
    subgraph H satisfies |V(H)| <= (2d+2)|x| and has average degree at least
    2 + (d-2)/(2d+2); both bounds are re-verified by direct count before H
    is returned.
    """
    seeds = sorted(set(x))
    if d < 2:
        raise CriticalSetError("density witness needs d >= 2")
    if not seeds:
        raise CriticalSetError("seed set is empty")
    if not is_connected_within(g, seeds):
        raise CriticalSetError("g[x] must be connected")
    crit = critical_set(g, seeds, d)
    k = len(seeds)
    if len(crit.members) < 2 * k:
        raise CriticalSetError(
            f"cascade too small for a witness: |C(x)|={len(crit.members)} < 2|x|={2 * k}"
        )

    added = [v for v, _ in crit.log[:k]]           # first |x| rule-additions
    rank = {s: 0 for s in seeds}
    for j, v in enumerate(added, start=1):
        rank[v] = j

    edges: set[tuple[int, int]] = set()

    def add_edge(a: int, b: int) -> None:
        edges.add((a, b) if a < b else (b, a))

    # spanning tree of g[x] keeps the seed side connected
    seen = {seeds[0]}
    stack = [seeds[0]]
    seed_set = set(seeds)
    while stack:
        v = stack.pop()
        for u in g.adj[v]:
            if u in seed_set and u not in seen:
                seen.add(u)
                add_edge(v, u)
                stack.append(u)

    pairs: list[tuple[int, int, int]] = []
    chosen_y: dict[int, tuple[int, ...]] = {}
    middlemen: set[int] = set()
    for j, (vj, triggers) in enumerate(crit.log[:k], start=1):
        y = sorted(triggers)[:d]                  # d smallest-index triggers
        chosen_y[vj] = tuple(y)
        for w in y:
            pairs.append((j, vj, w))
            add_edge(vj, w)
            if rank.get(w, 1 << 30) <= j - 1:
                continue
            direct = [c for c in g.adj[w] if rank.get(c, 1 << 30) <= j - 1]
            if direct:
                add_edge(w, min(direct))
                continue
            two_step = None
            for z in g.adj[w]:
                if z == vj:
                    continue
                for c in g.adj[z]:
                    if rank.get(c, 1 << 30) <= j - 1:
                        cand = (z, c)
                        if two_step is None or cand < two_step:
                            two_step = cand
                        break
            if two_step is None:
                raise AssertionError(
                    f"logged trigger {w} of {vj} has no distance-2 certificate"
                )
            z, c = two_step
            add_edge(w, z)
            add_edge(z, c)
            middlemen.add(z)

    def adjacency(es: set[tuple[int, int]]) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {}
        for a, b in es:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        return adj

    y_all = {w for ys in chosen_y.values() for w in ys}
    removable = sorted(middlemen - set(rank) - y_all)
    changed = True
    while changed:
        changed = False
        for z in removable:
            trimmed = {e for e in edges if z not in e}
            if len(trimmed) != len(edges) and _supported(adjacency(trimmed), rank, pairs):
                edges = trimmed
                changed = True
        removable = [z for z in removable if any(z in e for e in edges)]

    adj = adjacency(edges)
    while True:
        leaves = [v for v, ns in adj.items() if len(ns) <= 1]
        if not leaves:
            break
        for v in leaves:
            for u in adj.pop(v, ()):  # may be gone already
                adj[u].discard(v)
    edges = {(a, b) for a, ns in adj.items() for b in ns if a < b}

    verts = tuple(sorted(adj))
    if not verts:
        raise AssertionError("density witness pruned to nothing; cascade trace inconsistent")
    avg = Fraction(2 * len(edges), len(verts))
    bound = Fraction(2) + Fraction(d - 2, 2 * d + 2)
    assert len(verts) <= (2 * d + 2) * k, (
        f"witness has {len(verts)} vertices > (2d+2)|x| = {(2 * d + 2) * k}"
    )
    assert avg >= bound, f"witness average degree {avg} below {bound}"
    return PercolationWitness(
        vertices=verts,
        edges=tuple(sorted(edges)),
        average_degree=avg,
        seed_count=k,
        groups={
            "seeds": tuple(seeds),
            "added": tuple(added),
            "triggers": {v: chosen_y[v] for v in added},
            "middlemen": tuple(sorted(middlemen & set(adj))),
        },
    )


@dataclass(frozen=True)
class RatioStep:
    vertex: int
    edges_added: int
    vertices_added: int
    skipped: bool      # vertex was already present; no growth claim applies


def unbounded_ratio_probe(g: Graph, x: Iterable[int], d: int, budget: int = 64) -> list[RatioStep]:
    """Replay the cascade as an incremental subgraph and audit its growth rate.

    Each non-skipped step must add edges/vertices at ratio >= 3d/(2d+1)
    (asserted by cross-multiplication, so zero-vertex steps pass).  The
    cumulative average degree of the growing subgraph approaches 3d/(d+1)
    when cascades run long.
    """
    seeds = sorted(set(x))
    crit = critical_set(g, seeds, d)
    verts: set[int] = set(seeds)
    edges: set[tuple[int, int]] = set()
    for u in seeds:
        for w in g.adj[u]:
            if w in verts and u < w:
                edges.add((u, w))
    steps: list[RatioStep] = []
    for v, triggers in crit.log[:budget]:
        if v in verts:
            steps.append(RatioStep(v, 0, 0, True))
            continue
        e0, n0 = len(edges), len(verts)
        verts.add(v)
        for u in sorted(triggers)[:d]:
            # connector path from the trigger to the current subgraph, avoiding v
            parent: dict[int, Optional[int]] = {u: None}
            path_end = u if u in verts else None
            hops = 0
            frontier = [u]
            while path_end is None and hops < 2:
                hops += 1
                nxt = []
                for a in frontier:
                    for b in g.adj[a]:
                        if b == v or b in parent:
                            continue
                        parent[b] = a
                        if b in verts:
                            path_end = b
                            break
                        nxt.append(b)
                    if path_end is not None:
                        break
                frontier = nxt
            assert path_end is not None, "trigger lost its distance-2 certificate"
            node = path_end
            while parent[node] is not None:
                prev = parent[node]
                verts.add(prev)
                edges.add((node, prev) if node < prev else (prev, node))
                node = prev
            edges.add((v, u) if v < u else (u, v))
        ea, na = len(edges) - e0, len(verts) - n0
        assert ea * (2 * d + 1) >= 3 * d * na, (
            f"step at {v}: added {ea} edges / {na} vertices, below 3d/(2d+1)"
        )
        steps.append(RatioStep(v, ea, na, False))
    return steps


# --- addition-log trace format ----------------------------------------------
#
# one line per rule addition: "v <- {t1, t2, ...}"

def format_addition_log(log: list[tuple[int, tuple[int, ...]]]) -> str:
    lines = []
    for v, triggers in log:
        inner = ", ".join(str(t) for t in sorted(triggers))
        lines.append(f"{v} <- {{{inner}}}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_addition_log(text: str) -> list[tuple[int, tuple[int, ...]]]:
    out = []
    for raw in text.splitlines():
        ln = raw.strip()
        if not ln or ln.startswith("#"):
            continue
        head, _, rest = ln.partition("<-")
        rest = rest.strip()
        if not (rest.startswith("{") and rest.endswith("}")):
            raise CriticalSetError(f"bad trace line: {ln!r}")
        body = rest[1:-1].strip()
        triggers = tuple(int(t) for t in body.split(",")) if body else ()
        out.append((int(head.strip()), triggers))
    return out

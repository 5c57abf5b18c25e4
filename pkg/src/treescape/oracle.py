"""Brute-force oracles, written independently of the main algorithms.

These ground the test suite: an exhaustive induced-subtree search, a
complete enumeration of escape-ways on tiny graphs, and exact boundary
ratios over small vertex subsets.  Nothing here shares logic with the
modules under test; the point is an independent opinion.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, List, Optional, Tuple

from .graph import Graph
from .trees import TreeSpec


class OracleError(RuntimeError):
    pass


class BudgetExhausted(OracleError):
    """The search ran out of budget before completing.  Not the same as
    not-found: an exhausted search says nothing about existence."""


@dataclass(frozen=True)
class OracleBudget:
    max_vertices: int = 60
    max_nodes_expanded: int = 2_000_000
    time_hint: float = 60.0

    def __post_init__(self):
        if self.max_vertices < 1 or self.max_nodes_expanded < 1 or self.time_hint <= 0:
            raise ValueError("budget fields must be positive")


@dataclass(frozen=True)
class Embedding:
    mapping: Tuple[int, ...]   # tree node k -> host vertex

    def check(self, g: Graph, j: Graph, t: TreeSpec) -> List[str]:
        """Violation list; empty means the embedding is induced and valid."""
        out: List[str] = []
        if len(self.mapping) != t.size:
            return [f"mapping covers {len(self.mapping)} of {t.size} nodes"]
        if len(set(self.mapping)) != len(self.mapping):
            out.append("mapping is not injective")
        tree_edges = {(min(a, b), max(a, b)) for a, b in t.edges()}
        for a in range(t.size):
            for b in range(a + 1, t.size):
                xa, xb = self.mapping[a], self.mapping[b]
                if (a, b) in tree_edges:
                    if not j.has_edge(xa, xb):
                        out.append(f"tree edge {a}-{b} not a subgraph edge")
                elif g.has_edge(xa, xb):
                    out.append(f"non-adjacent nodes {a},{b} map to a host edge")
        return out


def brute_force_induced_embed(g: Graph, j: Graph, t: TreeSpec,
                              budget: OracleBudget = OracleBudget()) -> Optional[Embedding]:
    """Exhaustive backtracking search for an induced copy of t.

    Node k's image must be a j-neighbor of its parent's image and a
    g-non-neighbor of every other placed image.  Root candidates are tried
    in descending j-degree (a speed heuristic only; the search stays
    complete).  Returns None only when the whole space was exhausted.
    """
    if t.size > budget.max_vertices:
        raise OracleError(
            f"tree has {t.size} nodes, budget allows {budget.max_vertices}"
        )
    if t.size == 0:
        return Embedding(())
    deadline = time.monotonic() + budget.time_hint
    expanded = 0
    image: List[int] = [-1] * t.size
    used = set()

    def candidates(k: int) -> List[int]:
        if k == 0:
            return sorted(range(g.n), key=lambda v: (-j.degree(v), v))
        return sorted(j.adj[image[t.parent[k]]])

    def feasible(k: int, v: int) -> bool:
        if v in used:
            return False
        par = t.parent[k]
        for a in range(k):
            if a == par:
                continue
            if g.has_edge(image[a], v):
                return False
        return True

    def place(k: int) -> bool:
        nonlocal expanded
        if k == t.size:
            return True
        for v in candidates(k):
            expanded += 1
            if expanded > budget.max_nodes_expanded:
                raise BudgetExhausted(
                    f"expanded {expanded} states, budget {budget.max_nodes_expanded}"
                )
            if expanded % 4096 == 0 and time.monotonic() > deadline:
                raise BudgetExhausted(f"time hint {budget.time_hint}s exceeded")
            if not feasible(k, v):
                continue
            image[k] = v
            used.add(v)
            if place(k + 1):
                return True
            used.discard(v)
            image[k] = -1
        return False

    if place(0):
        emb = Embedding(tuple(image))
        assert not emb.check(g, j, t), "oracle produced an invalid embedding"
        return emb
    return None


# --- escape-way enumeration -----------------------------------------------------


def iter_escape_ways(g: Graph) -> Iterator[Tuple[Tuple[int, int], ...]]:
    """Every escape-way of g as a sorted arc tuple, smallest graphs only.

    Enumerates one in-arc choice (or none) per vertex, which already
    enforces in-degrees <= 1, then filters by the no-bi-orientation rule
    and the in-vertex inducedness rule, both checked from the definition
    rather than through the library validator.
    """
    if g.n > 6:
        raise OracleError(f"enumeration wants at most 6 vertices, got {g.n}")
    choices = [(None, *sorted(g.adj[v])) for v in range(g.n)]

    def rec(v: int, picked: List[Optional[int]]):
        if v == g.n:
            arcs = {(u, w) for w, u in enumerate(picked) if u is not None}
            for u, w in arcs:
                if (w, u) in arcs:
                    return
            inn = [w for w in range(g.n) if picked[w] is not None]
            for a in inn:
                for b in inn:
                    if a < b and g.has_edge(a, b):
                        if (a, b) not in arcs and (b, a) not in arcs:
                            return
            yield tuple(sorted(arcs))
            return
        for c in choices[v]:
            picked.append(c)
            yield from rec(v + 1, picked)
            picked.pop()

    yield from rec(0, [])


def enumerate_escape_ways(g: Graph) -> Tuple[int, List[Tuple[Tuple[int, int], ...]]]:
    """Count plus the full list (tiny graphs make the list cheap to keep)."""
    ways = list(iter_escape_ways(g))
    assert len(set(ways)) == len(ways)
    return len(ways), ways


# --- small-subset expansion -------------------------------------------------------


@dataclass(frozen=True)
class CheegerEstimate:
    edge_boundary_min_ratio: Optional[Fraction]
    vertex_boundary_min_ratio: Optional[Fraction]
    exact_flag: bool
    subsets_checked: int


def cheeger_small(g: Graph, size_cap: int) -> CheegerEstimate:
    """Exact minimum boundary ratios over nonempty proper subsets up to the
    cap.  exact_flag is set when the cap reaches |V|/2, which covers every
    subset the expansion constants quantify over."""
    best_edge: Optional[Fraction] = None
    best_vertex: Optional[Fraction] = None
    checked = 0
    cap = min(size_cap, max(g.n - 1, 0))
    for size in range(1, cap + 1):
        for combo in combinations(range(g.n), size):
            checked += 1
            inside = set(combo)
            edge_b = 0
            outside_hit = set()
            for v in combo:
                for u in g.adj[v]:
                    if u not in inside:
                        edge_b += 1
                        outside_hit.add(u)
            er = Fraction(edge_b, size)
            vr = Fraction(len(outside_hit), size)
            if best_edge is None or er < best_edge:
                best_edge = er
            if best_vertex is None or vr < best_vertex:
                best_vertex = vr
    return CheegerEstimate(
        edge_boundary_min_ratio=best_edge,
        vertex_boundary_min_ratio=best_vertex,
        exact_flag=2 * size_cap >= g.n,
        subsets_checked=checked,
    )

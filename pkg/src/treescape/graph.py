"""Immutable sparse-graph primitives shared by every other module.

Vertices are dense integers 0..n-1.  Graphs are simple and undirected;
"deleting" vertices is always expressed as building a new graph with
`masked_subgraph` so that vertex indices stay stable across a pipeline.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from heapq import heappush, heappop
from itertools import combinations
from typing import Iterable, Optional, Sequence


class GraphError(ValueError):
    pass


class Graph:
    """Adjacency-list graph.  Treat instances as immutable."""

    __slots__ = ("n", "adj", "nbr", "m")

    def __init__(self, n: int, adj: Sequence[Sequence[int]]):
        self.n = n
        self.adj = tuple(tuple(a) for a in adj)
        self.nbr = tuple(frozenset(a) for a in self.adj)
        self.m = sum(len(a) for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.nbr[u]

    def edges(self):
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def min_degree(self, within: Optional[Iterable[int]] = None) -> int:
        """Minimum degree, optionally restricted to the given vertices."""
        vs = range(self.n) if within is None else within
        return min((len(self.adj[v]) for v in vs), default=0)

    def support(self) -> list[int]:
        """Vertices of positive degree."""
        return [v for v in range(self.n) if self.adj[v]]

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a simple graph; rejects loops and out-of-range endpoints, dedups edges."""
    if n < 0:
        raise GraphError("vertex count must be non-negative")
    seen = set()
    adj = [[] for _ in range(n)]
    for u, v in edges:
        if u == v:
            raise GraphError(f"loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            continue
        seen.add(key)
        adj[u].append(v)
        adj[v].append(u)
    for a in adj:
        a.sort()
    return Graph(n, adj)


def masked_subgraph(g: Graph, keep: Iterable[int]) -> Graph:
    """Induced subgraph on `keep`, same index space (dropped vertices become isolated)."""
    mask = set(keep)
    adj = [
        [u for u in g.adj[v] if u in mask] if v in mask else []
        for v in range(g.n)
    ]
    return Graph(g.n, adj)


def compact_subgraph(g: Graph, vertices: Sequence[int]) -> tuple[Graph, list[int]]:
    """Induced subgraph relabeled to 0..k-1.  Returns (graph, old-index list)."""
    order = sorted(set(vertices))
    pos = {v: i for i, v in enumerate(order)}
    adj = [[pos[u] for u in g.adj[v] if u in pos] for v in order]
    return Graph(len(order), adj), order


def is_spanning_subgraph(j: Graph, g: Graph) -> bool:
    """True when j has the same vertex set and E(j) is contained in E(g)."""
    if j.n != g.n:
        return False
    return all(j.nbr[v] <= g.nbr[v] for v in range(j.n))


@dataclass(frozen=True)
class DegeneracyOrdering:
    order: tuple[int, ...]       # v at position i has <= degeneracy neighbors at positions < i
    degeneracy: int
    position: tuple[int, ...]    # inverse permutation: position[v] = index of v in order


def degeneracy_ordering(g: Graph) -> DegeneracyOrdering:
    """Min-degree peeling, ties broken by smallest vertex index.

    The removal sequence is reversed so that every vertex has at most
    `degeneracy` neighbors *earlier* in the ordering.
    """
    deg = [g.degree(v) for v in range(g.n)]
    removed = [False] * g.n
    heap: list[tuple[int, int]] = []
    for v in range(g.n):
        heappush(heap, (deg[v], v))
    peel: list[int] = []
    degeneracy = 0
    while heap:
        d, v = heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        degeneracy = max(degeneracy, d)
        peel.append(v)
        for u in g.adj[v]:
            if not removed[u]:
                deg[u] -= 1
                heappush(heap, (deg[u], u))
    order = tuple(reversed(peel))
    position = [0] * g.n
    for i, v in enumerate(order):
        position[v] = i
    return DegeneracyOrdering(order, degeneracy, tuple(position))


def bfs_within(g: Graph, sources: Iterable[int], excluded: Optional[int], radius: int) -> set[int]:
    """Vertices at distance <= radius from `sources` in g minus `excluded`.

    Sources themselves are at distance 0.  `excluded` must not be a source.
    """
    frontier = set(sources)
    if excluded is not None and excluded in frontier:
        raise GraphError("excluded vertex cannot be a BFS source")
    seen = set(frontier)
    for _ in range(radius):
        if not frontier:
            break
        nxt = set()
        for v in frontier:
            for u in g.adj[v]:
                if u != excluded and u not in seen:
                    seen.add(u)
                    nxt.add(u)
        frontier = nxt
    return seen


def max_codegree(g: Graph) -> int:
    """Maximum number of common neighbors over all vertex pairs (wedge count)."""
    best = 0
    counts: dict[tuple[int, int], int] = {}
    for w in range(g.n):
        a = g.adj[w]
        for i in range(len(a)):
            for jj in range(i + 1, len(a)):
                key = (a[i], a[jj])
                c = counts.get(key, 0) + 1
                counts[key] = c
                if c > best:
                    best = c
    return best


def connected_components(g: Graph, within: Optional[Iterable[int]] = None) -> list[list[int]]:
    vs = sorted(set(range(g.n)) if within is None else set(within))
    inside = set(vs)
    seen: set[int] = set()
    comps = []
    for s in vs:
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            v = stack.pop()
            for u in g.adj[v]:
                if u in inside and u not in seen:
                    seen.add(u)
                    comp.append(u)
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def is_connected_within(g: Graph, vertices: Iterable[int]) -> bool:
    vs = set(vertices)
    if not vs:
        return True
    return len(connected_components(g, vs)) == 1


@dataclass(frozen=True)
class DensityWitness:
    """A vertex set whose induced average degree exceeds a threshold."""
    vertices: tuple[int, ...]
    edge_count: int
    average_degree: Fraction

    def check(self, g: Graph, threshold: Fraction) -> None:
        vs = set(self.vertices)
        m = sum(1 for u in vs for w in g.adj[u] if w in vs and u < w)
        if m != self.edge_count:
            raise GraphError("density witness edge count does not match the graph")
        if Fraction(2 * m, len(vs)) != self.average_degree:
            raise GraphError("density witness average degree mis-stated")
        if self.average_degree <= threshold:
            raise GraphError("density witness does not exceed the threshold")


def induced_edge_count(g: Graph, vertices: Iterable[int]) -> int:
    vs = set(vertices)
    return sum(1 for u in vs for w in g.adj[u] if w in vs) // 2


def density_audit(g: Graph, size_cap: int, threshold: Fraction) -> Optional[DensityWitness]:
    """Search for a vertex set of size <= size_cap with induced average degree > threshold.

    Exhaustive for graphs on <= 14 vertices.  Larger graphs get a sound but
    incomplete heuristic (iterated core peeling at the smallest integer
    exceeding the threshold), so None means "none found", not "none exists".
    Any returned witness is re-verified before being handed back.
    """
    threshold = Fraction(threshold)
    cap = min(size_cap, g.n)
    if cap < 1:
        return None
    witness = None
    if g.n <= 14:
        best: Optional[tuple[Fraction, tuple[int, ...], int]] = None
        vs_all = list(range(g.n))
        for size in range(1, cap + 1):
            for combo in combinations(vs_all, size):
                inside = set(combo)
                m = sum(1 for u in combo for w in g.adj[u] if w in inside) // 2
                avg = Fraction(2 * m, size)
                if avg > threshold and (best is None or avg > best[0]):
                    best = (avg, combo, m)
        if best is not None:
            witness = DensityWitness(best[1], best[2], best[0])
    else:
        k = int(threshold) + 1  # smallest integer strictly above any threshold in [k-1, k)
        core = _iterated_core(g, k)
        if core:
            comps = connected_components(g, core)
            comps = [c for c in comps if len(c) <= cap]
            if comps:
                comp = min(comps, key=len)
                inside = set(comp)
                m = sum(1 for u in comp for w in g.adj[u] if w in inside) // 2
                avg = Fraction(2 * m, len(comp))
                if avg > threshold:
                    witness = DensityWitness(tuple(comp), m, avg)
    if witness is not None:
        witness.check(g, threshold)
    return witness


def _iterated_core(g: Graph, k: int) -> list[int]:
    """Vertices of the k-core (repeatedly delete vertices of degree < k)."""
    deg = [g.degree(v) for v in range(g.n)]
    alive = [bool(g.adj[v]) for v in range(g.n)]
    queue = [v for v in range(g.n) if alive[v] and deg[v] < k]
    while queue:
        v = queue.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for u in g.adj[v]:
            if alive[u]:
                deg[u] -= 1
                if deg[u] < k:
                    queue.append(u)
    return [v for v in range(g.n) if alive[v]]


# --- edge-list text format ------------------------------------------------
#
# First line "n m", then one "u v" line per edge, 0-based indices.

def write_edge_list(g: Graph, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v in sorted(g.edges()):
            fh.write(f"{u} {v}\n")


def parse_edge_list(text: str) -> Graph:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln and not ln.startswith("#")]
    if not lines:
        raise GraphError("empty edge-list document")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphError("header must be 'n m'")
    n, m = int(head[0]), int(head[1])
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphError(f"bad edge line: {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    if len(edges) != m:
        raise GraphError(f"header claims {m} edges, found {len(edges)}")
    g = build_graph(n, edges)
    if g.m != m:
        raise GraphError("duplicate edges in edge list")
    return g


def read_edge_list(path: str) -> Graph:
    with open(path) as fh:
        return parse_edge_list(fh.read())

"""Bounded-degree tree shapes used as embedding targets.

A target tree is stored in parent-array form: node 0 is the root and
node k's parent is a node with a smaller label.  That ordering means a
tree can always be built up one leaf at a time, which is exactly how
the embedding game consumes it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple


class TreeSpecError(ValueError):
    pass


@dataclass(frozen=True)
class TreeSpec:
    """A rooted tree on nodes 0..size-1, parent[k] < k for k >= 1."""

    parent: Tuple[int, ...]
    name: str = field(default="tree", compare=False)

    def __post_init__(self):
        if len(self.parent) == 0:
            raise TreeSpecError("tree must have at least one node")
        if self.parent[0] != -1:
            raise TreeSpecError("node 0 is the root and must have parent -1")
        for k, p in enumerate(self.parent):
            if k == 0:
                continue
            if not 0 <= p < k:
                raise TreeSpecError(
                    "node %d has parent %d; parents must precede children" % (k, p)
                )

    @property
    def size(self) -> int:
        return len(self.parent)

    def children(self, node: int) -> List[int]:
        return [k for k in range(1, self.size) if self.parent[k] == node]

    def degree(self, node: int) -> int:
        deg = sum(1 for k in range(1, self.size) if self.parent[k] == node)
        if node != 0:
            deg += 1
        return deg

    def max_degree(self) -> int:
        counts = [0] * self.size
        for k in range(1, self.size):
            counts[self.parent[k]] += 1
            counts[k] += 1
        return max(counts)

    def edges(self) -> List[Tuple[int, int]]:
        return [(self.parent[k], k) for k in range(1, self.size)]

    def validate_max_degree(self, delta: int) -> None:
        md = self.max_degree()
        if md > delta:
            raise TreeSpecError(
                "tree %r has maximum degree %d, above the bound %d"
                % (self.name, md, delta)
            )


def path_tree(size: int) -> TreeSpec:
    """A path rooted at one end."""
    if size < 1:
        raise TreeSpecError("size must be positive")
    return TreeSpec(tuple([-1] + list(range(size - 1))), name="path-%d" % size)


def star_tree(size: int) -> TreeSpec:
    """A star: the root adjacent to size-1 leaves."""
    if size < 1:
        raise TreeSpecError("size must be positive")
    return TreeSpec(tuple([-1] + [0] * (size - 1)), name="star-%d" % size)


def complete_ary_tree(delta: int, depth: int) -> TreeSpec:
    """Complete rooted tree: root has delta children, internal nodes delta-1.

    Every node then has total degree at most delta, so the shape is the
    extremal target for a given degree bound.
    """
    if delta < 1:
        raise TreeSpecError("delta must be positive")
    if depth < 0:
        raise TreeSpecError("depth must be nonnegative")
    parent = [-1]
    frontier = [0]
    for level in range(depth):
        fanout = delta if level == 0 else delta - 1
        nxt = []
        for node in frontier:
            for _ in range(fanout):
                parent.append(node)
                nxt.append(len(parent) - 1)
        frontier = nxt
    return TreeSpec(tuple(parent), name="ary-%d-depth-%d" % (delta, depth))


def random_bounded_tree(size: int, delta: int, seed: int) -> TreeSpec:
    """A uniform-ish random tree with maximum degree at most delta.

    Grows one leaf at a time, attaching to a uniformly random node that
    still has spare degree.  Not exactly uniform over all such trees,
    but well spread and cheap, which is what the experiments need.
    """
    if size < 1:
        raise TreeSpecError("size must be positive")
    if delta < 2 and size > delta + 1:
        raise TreeSpecError("cannot fit %d nodes with degree bound %d" % (size, delta))
    rng = random.Random(seed)
    parent = [-1]
    # residual degree capacity per node
    cap = [delta]
    open_nodes = [0]
    for k in range(1, size):
        if not open_nodes:
            raise TreeSpecError("degree bound %d exhausted at %d nodes" % (delta, k))
        node = open_nodes[rng.randrange(len(open_nodes))]
        parent.append(node)
        cap[node] -= 1
        if cap[node] == 0:
            open_nodes.remove(node)
        cap.append(delta - 1)
        if cap[-1] > 0:
            open_nodes.append(k)
    spec = TreeSpec(tuple(parent), name="random-%d-delta-%d-seed-%d" % (size, delta, seed))
    assert spec.max_degree() <= delta
    return spec


def tree_from_edges(edges: Sequence[Tuple[int, int]], root: int = 0) -> TreeSpec:
    """Build a TreeSpec from an undirected edge list by rooting at `root`.

    Relabels nodes into discovery order so the parent-array invariant
    holds regardless of the input labelling.
    """
    adj: Dict[int, List[int]] = {}
    for u, v in edges:
        if u == v:
            raise TreeSpecError("self-loop at %d" % u)
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if root not in adj and edges:
        raise TreeSpecError("root %d does not appear in the edge list" % root)
    if not edges:
        return TreeSpec((-1,), name="single")
    n = len(adj)
    if len(edges) != n - 1:
        raise TreeSpecError("%d edges on %d nodes is not a tree" % (len(edges), n))
    label = {root: 0}
    parent = [-1]
    queue = [root]
    while queue:
        u = queue.pop(0)
        for w in sorted(adj[u]):
            if w in label:
                continue
            label[w] = len(parent)
            parent.append(label[u])
            queue.append(w)
    if len(label) != n:
        raise TreeSpecError("edge list is not connected")
    return TreeSpec(tuple(parent), name="edges-%d" % n)


def tree_family(kind: str, size: int, delta: int, seed: int = 0) -> TreeSpec:
    """Dispatch used by the command line: path / star / ary / random."""
    if kind == "path":
        return path_tree(size)
    if kind == "star":
        if size > delta + 1:
            raise TreeSpecError("star-%d needs root degree %d > delta" % (size, size - 1))
        return star_tree(size)
    if kind == "ary":
        # fill a delta-ary shape breadth first, stopping at `size` nodes
        parent = [-1]
        cap = [delta]
        node = 0
        while len(parent) < size:
            if cap[node] == 0:
                node += 1
                assert node < len(parent), "ary fill ran out of open nodes"
                continue
            cap[node] -= 1
            parent.append(node)
            cap.append(delta - 1)
        return TreeSpec(tuple(parent), name="ary-%d-%d" % (delta, size))
    if kind == "random":
        return random_bounded_tree(size, delta, seed)
    raise TreeSpecError("unknown tree family %r" % kind)

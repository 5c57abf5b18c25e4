"""Escape-way calculus: oriented overlays that certify induced embeddability.

An *escape-way* D on a graph G is a set of arcs (each arc orienting an edge
of G) such that

  (a) every vertex has in-degree at most 1,
  (b) no edge carries both orientations,
  (c) the vertices with an in-arc (V_in) induce, pairwise, oriented edges:
      whenever x, y both have in-arcs and xy is an edge of G, exactly one of
      the arcs xy, yx belongs to D.

Condition (c) is what makes escape-ways useful for *induced* embeddings: a
tree drawn inside V_in can only ever meet G-edges that the overlay already
accounts for.  Any subset of an escape-way is again an escape-way.

The *closure* K(D) adds, for every arc (u, v), all arcs (v, w) with w a
G-neighbor of v other than u.  A vertex u is *available* to v when nothing
in the overlay prevents the future arc (v, u): u has no in-arc from a vertex
other than v, and (u, v) is not an arc.  The central equivalence (exercised
exhaustively by the acceptance suite) is, for escape-ways D, D':

    D ∪ D' is an escape-way
      <=>  D' agrees with K(D)
      <=>  every out-arc (x, y) of D' has y available at x w.r.t. K(D).

Agreement must be measured against the closure, not against D itself: with
D = {01, 12} and D' = {23} inside K5, D' agrees with the raw D (the two
in-neighbor sets never meet) yet the union leaves the 1-3 edge unoriented
between two in-vertices.  The closure arc (1, 3) is exactly what rules D'
out.
"""
from __future__ import annotations

from enum import Enum
from typing import Iterable, Optional

from .graph import Graph


class ArcError(ValueError):
    pass


class EscapeWayError(ValueError):
    """Base class for validation failures; carries the offending vertices."""


class InDegreeViolation(EscapeWayError):
    def __init__(self, vertex: int, in_neighbors):
        self.vertex = vertex
        self.in_neighbors = tuple(sorted(in_neighbors))
        super().__init__(f"vertex {vertex} has in-arcs from {self.in_neighbors}")


class BiOrientedEdge(EscapeWayError):
    def __init__(self, u: int, v: int):
        self.pair = (min(u, v), max(u, v))
        super().__init__(f"edge {self.pair} carries both orientations")


class InducednessViolation(EscapeWayError):
    def __init__(self, x: int, y: int):
        self.pair = (min(x, y), max(x, y))
        super().__init__(
            f"vertices {self.pair} both have in-arcs, are adjacent, "
            "but the edge between them is not oriented"
        )


class NotCompatible(ValueError):
    """Union of two escape-ways failed; names the first violated equivalence condition."""

    def __init__(self, condition: str, detail: str):
        self.condition = condition
        super().__init__(f"{condition}: {detail}")


class ArcSet:
    """A set of arcs over the edges of a fixed graph.  May hold both orientations."""

    __slots__ = ("g", "out", "inn", "arc_count")

    def __init__(self, g: Graph, arcs: Iterable[tuple[int, int]] = ()):
        self.g = g
        out: dict[int, set[int]] = {}
        inn: dict[int, set[int]] = {}
        count = 0
        for u, v in arcs:
            if not g.has_edge(u, v):
                raise ArcError(f"arc ({u}, {v}) does not orient an edge of the graph")
            if v in out.get(u, ()):
                continue
            out.setdefault(u, set()).add(v)
            inn.setdefault(v, set()).add(u)
            count += 1
        self.out = out
        self.inn = inn
        self.arc_count = count

    def __contains__(self, arc: tuple[int, int]) -> bool:
        u, v = arc
        return v in self.out.get(u, ())

    def arcs(self):
        for u, targets in self.out.items():
            for v in targets:
                yield (u, v)

    def sorted_arcs(self) -> list[tuple[int, int]]:
        return sorted(self.arcs())

    def out_neighbors(self, v: int) -> frozenset:
        return frozenset(self.out.get(v, ()))

    def in_neighbors(self, v: int) -> frozenset:
        return frozenset(self.inn.get(v, ()))

    def v_in(self) -> set[int]:
        """Vertices with at least one in-arc."""
        return set(self.inn)

    def v_out(self) -> set[int]:
        return set(self.out)

    def restrict(self, vertices: Iterable[int]) -> "ArcSet":
        vs = set(vertices)
        return ArcSet(self.g, ((u, v) for u, v in self.arcs() if u in vs and v in vs))

    def __len__(self):
        return self.arc_count

    def __repr__(self):
        return f"ArcSet({self.arc_count} arcs)"


class EscapeWay:
    """A validated escape-way.  `in_neighbor[v]` is v's unique in-neighbor or None."""

    __slots__ = ("base", "in_neighbor")

    def __init__(self, base: ArcSet, in_neighbor: dict[int, int]):
        self.base = base
        self.in_neighbor = in_neighbor

    @property
    def g(self) -> Graph:
        return self.base.g

    def arcs(self):
        return self.base.arcs()

    def sorted_arcs(self):
        return self.base.sorted_arcs()

    def __contains__(self, arc):
        return arc in self.base

    def __len__(self):
        return len(self.base)

    def v_in(self) -> set[int]:
        return set(self.in_neighbor)

    def v_out(self) -> set[int]:
        return self.base.v_out()

    def out_neighbors(self, v: int) -> frozenset:
        return self.base.out_neighbors(v)

    def __repr__(self):
        return f"EscapeWay({len(self.base)} arcs)"


def validate_escape_way(g: Graph, arcs: ArcSet | Iterable[tuple[int, int]]) -> EscapeWay:
    """Check conditions (a)-(c); raises the first violation found, in that order."""
    a = arcs if isinstance(arcs, ArcSet) else ArcSet(g, arcs)
    if a.g is not g:
        a = ArcSet(g, a.arcs())  # re-validate arcs against this graph
    in_neighbor: dict[int, int] = {}
    for v, srcs in a.inn.items():
        if len(srcs) > 1:
            raise InDegreeViolation(v, srcs)
        in_neighbor[v] = next(iter(srcs))
    for u, targets in a.out.items():
        for v in targets:
            if u in a.out.get(v, ()):
                raise BiOrientedEdge(u, v)
    vin = sorted(in_neighbor)
    vin_set = set(vin)
    for x in vin:
        for y in g.adj[x]:
            if y > x and y in vin_set:
                if (x, y) not in a and (y, x) not in a:
                    raise InducednessViolation(x, y)
    return EscapeWay(a, in_neighbor)


def closure_K(g: Graph, d: EscapeWay | ArcSet) -> ArcSet:
    """K(d): d plus, for every arc (u, v), all arcs (v, w) with w in N(v) \\ {u}.

    Monotone in d.  When d is an escape-way the result has no bi-oriented
    pair (asserted); closure of non-escape-way arc sets is allowed but
    unchecked.
    """
    base = d.base if isinstance(d, EscapeWay) else d
    arcs = set(base.arcs())
    for u, v in base.arcs():
        for w in g.adj[v]:
            if w != u:
                arcs.add((v, w))
    k = ArcSet(g, arcs)
    if isinstance(d, EscapeWay):
        for u, v in k.arcs():
            assert u not in k.out.get(v, ()), "closure of an escape-way grew a bi-oriented pair"
    return k


def available_neighbors(g: Graph, d: ArcSet | EscapeWay, v: int) -> set[int]:
    """A_d(v): neighbors u of v with no in-arc from any vertex other than v
    and with (u, v) not an arc."""
    base = d.base if isinstance(d, EscapeWay) else d
    avail = set()
    for u in g.adj[v]:
        if v in base.out.get(u, ()):
            continue
        srcs = base.inn.get(u)
        if srcs and (len(srcs) > 1 or v not in srcs):
            continue
        avail.add(u)
    return avail


def available_neighbors_in(g: Graph, j: Graph, d: ArcSet | EscapeWay, v: int) -> set[int]:
    """A_d(v) intersected with v's neighborhood in the spanning subgraph j.

    The subgraph relation is enforced at v: every j-neighbor of v must also
    be a g-neighbor.
    """
    if j.n != g.n or not j.nbr[v] <= g.nbr[v]:
        raise ArcError("j is not a subgraph of g")
    return available_neighbors(g, d, v) & j.nbr[v]


def agrees(d_new: EscapeWay, h: ArcSet | EscapeWay) -> bool:
    """Does escape-way d_new agree with the (bi-)oriented overlay h?

    (a) every vertex with in-arcs in both has the same in-neighbor set in
        both, and (b) no arc of h appears reversed in d_new.
    """
    hbase = h.base if isinstance(h, EscapeWay) else h
    dbase = d_new.base
    for x, hin in hbase.inn.items():
        din = dbase.inn.get(x)
        if din is not None and din != hin:
            return False
    for u, v in hbase.arcs():
        if u in dbase.out.get(v, ()):
            return False
    return True


def union_escape_ways(g: Graph, d: EscapeWay, d2: EscapeWay) -> EscapeWay:
    """Union of two escape-ways, validated.

    The three equivalent compatibility conditions (union validates; d2
    agrees with K(d); every out-arc of d2 lands on a K(d)-available vertex)
    are all evaluated and must coincide; the first failed one names the
    NotCompatible error.
    """
    union_arcs = set(d.arcs()) | set(d2.arcs())
    union_err: Optional[EscapeWayError] = None
    try:
        union = validate_escape_way(g, ArcSet(g, union_arcs))
    except EscapeWayError as e:
        union = None
        union_err = e
    cond_union = union is not None
    k = closure_K(g, d)
    cond_agrees = agrees(d2, k)
    cond_avail = all(y in available_neighbors(g, k, x) for x, y in d2.arcs())
    assert cond_union == cond_agrees == cond_avail, (
        "equivalence of union/agreement/closure-availability broke: "
        f"{cond_union}/{cond_agrees}/{cond_avail}"
    )
    if not cond_union:
        raise NotCompatible("union-not-an-escape-way", str(union_err))
    return union


class OrientationClass(Enum):
    ROOTED_TREE = "rooted-tree"
    PSEUDOFOREST_CYCLIC = "pseudoforest-cyclic"
    INVALID = "invalid"


def classify_orientation(g_component: Graph, a: ArcSet) -> OrientationClass:
    """Classify an orientation of a connected graph by its in-degree profile.

    Expects every edge of the component oriented (at least one direction).
    ROOTED_TREE: all in-degrees <= 1 with some in-degree 0 among the
    component's vertices; PSEUDOFOREST_CYCLIC: every in-degree exactly 1;
    INVALID otherwise (some in-degree >= 2, or a bi-oriented edge).
    """
    verts = [v for v in range(g_component.n) if g_component.adj[v]]
    if not verts:
        return OrientationClass.ROOTED_TREE
    for u, v in g_component.edges():
        fwd = (u, v) in a
        bwd = (v, u) in a
        if not fwd and not bwd:
            raise ArcError(f"edge ({u}, {v}) is not oriented")
        if fwd and bwd:
            return OrientationClass.INVALID
    indeg = {v: len(a.inn.get(v, ())) for v in verts}
    if any(d > 1 for d in indeg.values()):
        return OrientationClass.INVALID
    if all(d == 1 for d in indeg.values()):
        return OrientationClass.PSEUDOFOREST_CYCLIC
    return OrientationClass.ROOTED_TREE


# --- arc-list text format ---------------------------------------------------
#
# One arc per line, "u > v".  Reading an escape-way runs the validator.

def write_arc_list(a: ArcSet | EscapeWay, path: str) -> None:
    base = a.base if isinstance(a, EscapeWay) else a
    with open(path, "w") as fh:
        for u, v in base.sorted_arcs():
            fh.write(f"{u} > {v}\n")


def parse_arc_list(text: str, g: Graph) -> ArcSet:
    arcs = []
    for raw in text.splitlines():
        ln = raw.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split(">")
        if len(parts) != 2:
            raise ArcError(f"bad arc line: {ln!r}")
        try:
            arcs.append((int(parts[0]), int(parts[1])))
        except ValueError as e:
            raise ArcError(f"bad arc line: {ln!r}") from e
    return ArcSet(g, arcs)


def read_arc_list(path: str, g: Graph) -> ArcSet:
    with open(path) as fh:
        return parse_arc_list(fh.read(), g)


def read_escape_way(path: str, g: Graph) -> EscapeWay:
    return validate_escape_way(g, read_arc_list(path, g))

"""A walk through the escape-way calculus on small graphs.

An escape-way is a partial orientation of a graph that plays the role of a
reservation ledger: an arc u -> v means "u is holding v for later".  Three
rules make the ledger consistent: nobody is held by two owners (in-degree
at most one), no edge is held in both directions, and any two held vertices
that are adjacent must have their shared edge oriented.  This script builds
a few ledgers by hand and pokes at the operations the library exposes.
"""

from treescape.escapeway import (
    ArcSet,
    EscapeWayError,
    agrees,
    available_neighbors,
    closure_K,
    union_escape_ways,
    validate_escape_way,
    write_arc_list,
)
from treescape.graph import build_graph

# a 5-cycle with one chord: 0-1-2-3-4-0 plus 1-3
g = build_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)])
print(f"host: {g.n} vertices, {g.m} edges")

d = validate_escape_way(g, [(0, 1), (3, 2)])
print("a valid ledger:", write_arc_list(d.base))

# the validator names the first broken rule
for arcs, label in [
    ([(0, 1), (2, 1)], "two owners for vertex 1"),
    ([(0, 1), (1, 0)], "edge held in both directions"),
    ([(0, 1), (4, 3)], "held vertices 1 and 3 share an unoriented edge"),
]:
    try:
        validate_escape_way(g, arcs)
    except EscapeWayError as e:
        print(f"rejected ({label}): {type(e).__name__}")

# The closure is the one-step fan-out: whoever is held must in turn point at
# everything it could be extended toward.  It is the object all compatibility
# questions are asked against.
k = closure_K(g, d.base)
print("closure of the ledger:", write_arc_list(k))
print("available neighbors of 4 under the closure:",
      sorted(available_neighbors(g, k, 4)))

# Unions are only allowed when the newcomer agrees with the closure, not
# just with the raw ledger.  K5 shows why the distinction matters.
k5 = build_graph(5, [(u, v) for u in range(5) for v in range(u + 1, 5)])
base = validate_escape_way(k5, [(0, 1), (1, 2)])
newcomer = validate_escape_way(k5, [(2, 3)])
print("newcomer agrees with the raw ledger:", agrees(newcomer, base.base))
print("newcomer agrees with its closure:   ",
      agrees(newcomer, closure_K(k5, base.base)))
try:
    union_escape_ways(k5, base, newcomer)
except EscapeWayError as e:
    print("and indeed the union is refused:", e)

# on the chorded cycle a compatible newcomer goes through fine
ok = union_escape_ways(g, d, validate_escape_way(g, [(3, 4)]))
print("union on the chorded cycle:", write_arc_list(ok.base))
assert len(ok) == 3

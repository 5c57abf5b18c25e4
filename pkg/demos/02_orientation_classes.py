"""What fully oriented components can look like.

Once every edge of a connected graph carries exactly one direction and every
vertex has in-degree at most one, a counting argument leaves only two
shapes: a rooted tree (one vertex of in-degree zero, everything else fed
once) or a pseudoforest component whose in-degrees are all exactly one,
which forces exactly one cycle.  The classifier reports which of the two a
given orientation is, or flags it as invalid.
"""

from treescape.escapeway import ArcSet, OrientationClass, classify_orientation
from treescape.graph import build_graph


def show(g, arcs, label):
    cls = classify_orientation(g, ArcSet(g, arcs))
    print(f"{label:<42} -> {cls.value}")
    return cls


# a path oriented away from its left end is a rooted tree
p4 = build_graph(4, [(0, 1), (1, 2), (2, 3)])
assert show(p4, [(0, 1), (1, 2), (2, 3)], "path oriented left to right") \
    is OrientationClass.ROOTED_TREE

# reversing the last arc hands vertex 2 two parents
show(p4, [(0, 1), (1, 2), (3, 2)], "same path, last arc flipped")

# a directed cycle is the canonical pseudoforest component
c5 = build_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
assert show(c5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], "5-cycle, one way around") \
    is OrientationClass.PSEUDOFOREST_CYCLIC

# a cycle with a pendant vertex still has exactly n edges, so a proper
# orientation must keep the cycle and feed the pendant from it
tadpole = build_graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (2, 5)])
show(tadpole, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (2, 5)], "tadpole, cycle feeding the tail")

# orient the tail edge inward instead and vertex 2 is doubly fed
show(tadpole, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 2)], "tadpole, tail biting back")

# edge counts alone decide the class of any properly oriented component:
# m = n - 1 gives the rooted tree, m = n gives the cyclic pseudoforest,
# and m > n admits no proper orientation at all
for g, arcs, label in [
    (p4, [(1, 0), (1, 2), (2, 3)], "3 edges on 4 vertices, proper"),
    (c5, [(1, 0), (1, 2), (2, 3), (3, 4), (4, 0)], "5 edges on 5 vertices, improper"),
]:
    show(g, arcs, label)

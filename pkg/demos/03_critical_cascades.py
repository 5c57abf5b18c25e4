"""Bootstrap percolation around a growing tree, and what a big cascade buys you.

A vertex is d-critical for a seed set X when at least d of its neighbors sit
within distance two of X once the vertex itself is removed.  Criticality is
contagious: newly critical vertices can tip their own neighbors.  The library
tracks the fixed point incrementally, certifies the payoff inequality on
available neighborhoods, and, whenever a cascade gets large, distills a small
dense witness subgraph out of it.
"""

from treescape.critical import (
    assert_available_bound,
    critical_set,
    density_witness,
    extend_critical,
)
from treescape.escapeway import ArcSet
from treescape.graph import build_graph
import itertools

# host: an 8-clique with pendants and a long sparse tail hanging off it
edges = list(itertools.combinations(range(8), 2))
for v in range(8, 24):
    edges.append((v - 8 if v < 16 else v - 1, v))
g = build_graph(24, edges)

crit = critical_set(g, [0], 3)
print(f"3-critical set of seed {{0}}: {sorted(crit.members)}")
print(f"(the clique cascades, the tail stays quiet)")

# growing the seed set incrementally matches recomputing from scratch
inc = extend_critical(crit, [20])
scratch = critical_set(g, [0, 20], 3)
assert inc.members == scratch.members
print(f"after adding seed 20 the set has {len(inc.members)} members "
      f"(incremental == scratch: True)")

# the dividend: any reservation ledger whose owners all sit inside the
# critical set leaves every outside vertex nearly its whole neighborhood
overlay = ArcSet(g, [(0, 8), (1, 9)])
report = assert_available_bound(g, crit, overlay)
print(f"available-bound check: {report.checked} outside vertices, "
      f"{len(report.violations)} violations")

# a cascade larger than twice the seed count yields a dense witness
w = density_witness(g, [0, 1], 3)
print(f"density witness: {len(w.vertices)} vertices, {len(w.edges)} edges, "
      f"average degree {w.average_degree} (threshold 2 + 1/8 = {2 + 1/8})")
assert w.average_degree >= 2 + (3 - 2) / (2 * 3 + 2)

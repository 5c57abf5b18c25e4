"""One full round of the embedding game, played move by move.

The game state holds a partial tree image, the bootstrap-percolation ledger
of critical vertices, and the escape-way of reserved arcs.  An adversary
names which tree node to extend; the state either consumes a reserved arc
(critical case) or runs a fresh randomized reservation around the new image.
Rollbacks delete whole subtrees and replay is expected to keep working.
"""

from treescape.embedder import GameConfig, start_game
from treescape.experiments import random_regular
from treescape.reports import dot_export

host = random_regular(300, 10, seed=14)
cfg = GameConfig(delta=3, mode="practical", d=11, seed=99,
                 sample_prob=0.5, max_retries=64, auto_expand_rollback=True)

st = start_game(host, host, cfg)
print(f"root placed at vertex {st.image_of[0]}, "
      f"{len(st.root_reserve)} arcs frozen for it, "
      f"{len(st.deleted)} competing neighbors deleted")

# grow a small caterpillar: two children under the root, then a chain
for node in (0, 0, 1, 1, 3):
    new = st.extend_node(node)
    ev = st.events[-1]
    print(f"extend node {node} -> node {new} at vertex {st.image_of[new]} "
          f"(case {ev['case']})")

print(f"tree size {st.tree_size}, critical set {len(st.crit.members)} vertices, "
      f"escape-way {len(st.bway)} arcs")

# delete node 1: auto-expansion takes its whole subtree with it
removed = st.rollback_nodes([1])
print(f"rollback of node 1 removed nodes {removed}")
st.check_invariants(full=True)

# replay: the game keeps going from the smaller tree
n_before = st.tree_size
for node in (0, 2, 2):
    st.extend_node(node)
assert st.tree_size == n_before + 3

cert = st.verify_induced()
print(f"inducedness certificate: {cert.tree_edges_checked} tree edges and "
      f"{cert.non_adjacent_pairs_checked} non-adjacent pairs checked, "
      f"violations={cert.violations}")
assert cert.ok

print("\nfinal tree in dot format:")
print(dot_export(st))

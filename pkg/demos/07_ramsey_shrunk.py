"""Size-Ramsey style experiments, shrunk down to something a laptop can draw.

The literal host prescription is astronomically large: its order carries a
10^30 prefactor.  The experiment pipeline keeps every structural choice
(random host, adversarial two-colouring, majority class extraction, embedding
in the extracted class) but lets a shrink knob scale the prefactor exponents
down to desk size.  The shrink factor is recorded in every report so nobody
mistakes these runs for the real constants.
"""

from fractions import Fraction

from treescape.adversaries import make_adversary
from treescape.embedder import GameConfig, run_game
from treescape.experiments import (
    ColoringPolicy,
    RamseyHostParams,
    color_and_extract,
    literal_ramsey_values,
    ramsey_host,
)
from treescape.trees import random_bounded_tree

# how big is the literal prescription?
for delta, eps in [(3, 0.5), (5, 0.25)]:
    order, degree = literal_ramsey_values(delta, eps, 40)
    print(f"delta={delta} eps={eps}: literal host order ~ 10^{len(str(order)) - 1}, "
          f"degree ~ 10^{len(str(degree)) - 1}")

# shrink the exponents to get a usable host
params = RamseyParams(delta=3, q=2, epsilon=Fraction(1, 2), tree_size=12,
                      shrink=0.045, seed=9)
host_report = ramsey_host(params)
g = host_report.host
print(f"\nshrunk host: {g.n} vertices, {g.m} edges "
      f"(literal order was {host_report.literal_order:.2e})")

# colour the edges adversarially, then extract the majority colour class
policy = ColoringPolicy(kind="greedy-adversarial", q=2, seed=9)
extraction = color_and_extract(g, policy, params.epsilon, host_report.host_degree)
print(f"majority colour {extraction.colour}: {extraction.class_edges} of "
      f"{extraction.total_edges} edges; peeled to {len(extraction.survivors)} "
      f"vertices over {len(extraction.peel_trace)} rounds")
assert 2 * extraction.class_edges >= extraction.total_edges

# now embed a tree inside the extracted class
spec = random_bounded_tree(params.tree_size, params.delta, seed=5)
cfg = GameConfig(delta=params.delta, mode="practical",
                 d=g.max_degree() + 1, seed=31, sample_prob=0.5,
                 max_retries=128)
result = run_game(g, extraction.j, cfg,
                  make_adversary("bfs", spec, seed=0), target_n=params.tree_size)
print(f"embedding a {params.tree_size}-node tree in the majority class: "
      f"{'success, certified' if result.success else result.error}")

"""Request strategies for driving the embedding game.

The game itself only answers requests; the adversary decides what to
ask for.  Four strategies realise a fixed target tree in different
orders (depth first, breadth first, uniformly at random, and a hostile
order that extends wherever the critical set is closest), and a
scripted strategy replays an explicit request list, which is also the
format the command line accepts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .graph import Graph, bfs_within
from .trees import TreeSpec


@dataclass(frozen=True)
class Extend:
    node: int


@dataclass(frozen=True)
class Rollback:
    nodes: Tuple[int, ...]


class AdversaryError(ValueError):
    pass


class Adversary:
    """Base protocol.  Subclasses override next_request and observers."""

    def next_request(self, view) -> Optional[object]:
        raise NotImplementedError

    def observe_extend(self, node: int, new_node: int) -> None:
        pass

    def observe_rollback(self, removed: Sequence[int]) -> None:
        pass


class ScriptedAdversary(Adversary):
    """Replays lines of the form `extend <id>` or `rollback <id> <id>...`.

    Node ids refer to game node ids.  Lines starting with # and blank
    lines are skipped.
    """

    def __init__(self, text: str):
        self.requests: List[object] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if parts[0] == "extend" and len(parts) == 2:
                self.requests.append(Extend(int(parts[1])))
            elif parts[0] == "rollback" and len(parts) >= 2:
                self.requests.append(Rollback(tuple(int(p) for p in parts[1:])))
            else:
                raise AdversaryError("bad script line %d: %r" % (lineno, raw))
        self._pos = 0

    def next_request(self, view):
        if self._pos >= len(self.requests):
            return None
        req = self.requests[self._pos]
        self._pos += 1
        return req


class TreeDrivenAdversary(Adversary):
    """Realises a fixed TreeSpec, choosing the attachment order by policy.

    Keeps a map from spec nodes to game node ids.  A spec node is
    pending once its parent is mapped; the policy picks which pending
    node to attach next.
    """

    def __init__(self, spec: TreeSpec, policy: str = "bfs", seed: int = 0):
        if policy not in ("dfs", "bfs", "random", "hostile"):
            raise AdversaryError("unknown policy %r" % policy)
        self.spec = spec
        self.policy = policy
        self.rng = random.Random(seed)
        self.mapping: Dict[int, int] = {0: 0}  # spec root -> game root (id 0)
        self.children: Dict[int, List[int]] = {}
        for k in range(1, spec.size):
            self.children.setdefault(spec.parent[k], []).append(k)
        self.pending: List[int] = list(self.children.get(0, []))
        self._awaiting: Optional[int] = None
        # hostile bookkeeping: host vertices within distance 2 of the
        # critical set, grown incrementally as the critical set grows
        self._near: Set[int] = set()
        self._seen_members: Set[int] = set()

    def _grow_near(self, g: Graph, members) -> None:
        fresh = [w for w in members if w not in self._seen_members]
        for w in fresh:
            self._seen_members.add(w)
            self._near |= bfs_within(g, [w], None, 2)

    def _score(self, view, spec_node: int) -> int:
        # how close the would-be parent sits to criticality
        parent_game = self.mapping[self.spec.parent[spec_node]]
        x = view.image(parent_game)
        return sum(1 for u in view.g.nbr[x] if u in self._near)

    def next_request(self, view):
        if self._awaiting is not None:
            raise AdversaryError("previous extend result was never observed")
        if not self.pending:
            return None
        if self.policy == "dfs":
            idx = len(self.pending) - 1
        elif self.policy == "bfs":
            idx = 0
        elif self.policy == "random":
            idx = self.rng.randrange(len(self.pending))
        else:
            self._grow_near(view.g, view.critical_members)
            best = max(
                range(len(self.pending)),
                key=lambda i: (self._score(view, self.pending[i]), -self.pending[i]),
            )
            idx = best
        spec_node = self.pending.pop(idx)
        self._awaiting = spec_node
        return Extend(self.mapping[self.spec.parent[spec_node]])

    def observe_extend(self, node: int, new_node: int) -> None:
        assert self._awaiting is not None
        spec_node = self._awaiting
        self._awaiting = None
        self.mapping[spec_node] = new_node
        self.pending.extend(self.children.get(spec_node, []))

    def observe_rollback(self, removed: Sequence[int]) -> None:
        # tree-driven strategies never roll back, but stay consistent
        # if someone mixes a manual rollback into the run
        removed_set = set(removed)
        dropped = [s for s, gnode in self.mapping.items() if gnode in removed_set]
        for s in dropped:
            del self.mapping[s]
        self.pending = [p for p in self.pending if self.spec.parent[p] in self.mapping]
        for s in dropped:
            if self.spec.parent[s] in self.mapping and s not in self.pending:
                self.pending.append(s)


def make_adversary(
    policy: str, spec: TreeSpec, seed: int = 0, script: Optional[str] = None
) -> Adversary:
    if policy == "scripted":
        if script is None:
            raise AdversaryError("scripted adversary needs a script")
        return ScriptedAdversary(script)
    return TreeDrivenAdversary(spec, policy=policy, seed=seed)

"""Randomized out-neighbor reservation with deterministic clash resolution.

Given a host f, a spanning subgraph j of usable edges, and an overlay h
recording commitments made so far, reservation builds an escape-way I that
agrees with h and hands each requested vertex out-arcs toward its available
j-neighbors.  The recipe:

1. orient every edge not already oriented by h from earlier to later along
   a degeneracy order (so each vertex has at most C potential in-arcs),
2. drop arcs whose head is not available to the tail,
3. keep each remaining arc independently with probability p = 1/C^2,
4. delete all in-arcs of every vertex where the sample clashes, by two
   deterministic rules evaluated against the untouched sample.

On hosts of degeneracy at most C each arc survives steps 3-4 with
probability at least 1/(e C^2), so resampling with fresh per-attempt seeds
reaches any per-vertex target a constant factor below |A|/(2 e C^2) after
few retries.  The output is revalidated as an escape-way and checked to
agree with h on every attempt.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .escapeway import (
    ArcSet,
    EscapeWay,
    agrees,
    available_neighbors_in,
    validate_escape_way,
)
from .graph import DegeneracyOrdering, Graph, degeneracy_ordering


class ReservationError(RuntimeError):
    pass


class DegeneracyCapExceeded(ReservationError):
    """The host's measured degeneracy exceeds the cap the guarantee assumes."""


class TargetUnreachable(ReservationError):
    """All retries missed some per-vertex target; carries the best attempt."""

    def __init__(self, message: str, outcome: "ReservationOutcome"):
        super().__init__(message)
        self.outcome = outcome


def target_zero(v: int, avail: int) -> int:
    return 0


def paper_target(tree_max_degree: int) -> Callable[[int, int], int]:
    """The literal guarantee floor(|A|/10^7 - 5 ln D), clamped at zero.

    Useless below astronomical scale; kept for hypothesis audits.  Natural
    logarithm (no base is ever fixed where the bound is stated).
    """
    assert tree_max_degree >= 1
    penalty = 5.0 * math.log(tree_max_degree)

    def tgt(v: int, avail: int) -> int:
        return max(0, math.floor(avail / 10**7 - penalty))

    return tgt


def practical_target(tree_max_degree: int, degeneracy_cap: int) -> Callable[[int, int], int]:
    """Desk-scale target: max(D, ceil(|A| / (2 e C^2))).

    Vertices with |A| <= C are exempt (target 0): the restriction step only
    promises |A| - C out-arc candidates, so nothing can be demanded of them;
    this mirrors the trivial-case exemption in the guarantee itself.
    """
    assert tree_max_degree >= 1 and degeneracy_cap >= 1
    denom = 2.0 * math.e * degeneracy_cap * degeneracy_cap

    def tgt(v: int, avail: int) -> int:
        if avail <= degeneracy_cap:
            return 0
        return max(tree_max_degree, math.ceil(avail / denom))

    return tgt


@dataclass(frozen=True)
class ReservationParams:
    """Knobs for one reservation run.

    degeneracy_cap is the C of all formulas; sample_prob defaults to 1/C^2.
    target maps (vertex, |A_h in j|) to the required out-degree.
    """

    degeneracy_cap: int
    sample_prob: Optional[float] = None
    target: Callable[[int, int], int] = target_zero
    max_retries: int = 64
    rng_seed: int = 0

    def __post_init__(self):
        if self.degeneracy_cap < 1:
            raise ValueError("degeneracy_cap must be >= 1")
        if self.max_retries < 1:
            raise ValueError("max_retries must be >= 1")
        p = self.p
        if not (0.0 < p <= 1.0):
            raise ValueError(f"sample probability {p} outside (0, 1]")

    @property
    def p(self) -> float:
        if self.sample_prob is not None:
            return self.sample_prob
        return 1.0 / (self.degeneracy_cap * self.degeneracy_cap)


@dataclass(frozen=True)
class ReservationOutcome:
    escape_way: EscapeWay
    achieved: dict[int, int]          # out-degree per vertex (zeros omitted)
    deficits: tuple[int, ...]         # vertices that missed their target
    retries_used: int
    sampled: int = 0                  # arcs drawn on the reported attempt
    kept: int = 0                     # arcs surviving clash resolution

    @property
    def ok(self) -> bool:
        return not self.deficits


def orient_forward(f: Graph, h: ArcSet, ordering: DegeneracyOrdering) -> ArcSet:
    """G'': h's arcs as given, every other edge oriented earlier-to-later."""
    arcs = list(h.arcs())
    oriented = {(u, v) if u < v else (v, u) for u, v in arcs}
    pos = ordering.position
    for u, v in f.edges():
        if (u, v) in oriented:
            continue
        arcs.append((u, v) if pos[u] < pos[v] else (v, u))
    return ArcSet(f, arcs)


def restrict_available(f: Graph, j: Graph, g2: ArcSet, h: ArcSet,
                       forbidden_in: frozenset[int] = frozenset()) -> ArcSet:
    """G': arcs (v, u) of g2 whose head is available to v within j.

    Every vertex keeps at least |A_h^j(v) minus forbidden| - C out-arcs, C
    the degeneracy of f: a permitted available head can only be missing when
    the edge was oriented the other way, which needs the head to be one of
    v's <= C earlier neighbors.  The bound is asserted, not documented.

    forbidden_in names vertices that must not receive arcs at all.  Callers
    whose overlay is the restriction of a larger structure use it for heads
    whose blocking in-arcs come from outside f and are invisible to h.
    """
    kept = []
    avail: list[set[int]] = []
    for v in range(f.n):
        av = available_neighbors_in(f, j, h, v) - forbidden_in
        avail.append(av)
        for u in g2.out_neighbors(v):
            if u in av:
                kept.append((v, u))
    gp = ArcSet(f, kept)
    c = degeneracy_ordering(f).degeneracy
    for v in range(f.n):
        assert len(gp.out_neighbors(v)) >= len(avail[v]) - c, (
            f"vertex {v}: {len(gp.out_neighbors(v))} arcs for "
            f"{len(avail[v])} available, degeneracy {c}"
        )
    return gp


def clash_resolve(f: Graph, g2: ArcSet, sample: ArcSet,
                  ordering: DegeneracyOrdering) -> EscapeWay:
    """Delete the in-arcs of every clashing vertex; both rules read the
    untouched sample, so the scan order cannot leak into the result.

    Rule (1): the vertex drew two or more in-arcs.
    Rule (2): it drew exactly one, but some other potential in-neighbor
    (in G'') outside the sample drew an in-arc of its own; keeping both
    would leave an edge between two in-vertices unoriented.
    """
    kept: list[tuple[int, int]] = []
    for v in ordering.order:
        tails = sample.in_neighbors(v)
        if not tails:
            continue
        if len(tails) >= 2:
            continue
        others = g2.in_neighbors(v) - tails
        if any(sample.in_neighbors(u) for u in others):
            continue
        (t,) = tails
        kept.append((t, v))
    return validate_escape_way(f, kept)


def _sample(gp: ArcSet, p: float, rng: random.Random) -> ArcSet:
    if p >= 1.0:
        return ArcSet(gp.g, gp.sorted_arcs())
    return ArcSet(gp.g, [a for a in gp.sorted_arcs() if rng.random() < p])


def _attempt_seed(seed: int, attempt: int) -> int:
    return seed * 1_000_003 + attempt


def reserve(f: Graph, j: Graph, h: ArcSet | EscapeWay,
            params: ReservationParams,
            forbidden_in: frozenset[int] = frozenset()) -> ReservationOutcome:
    """Resample until every vertex reaches its target out-degree.

    Returns the first success; after max_retries raises TargetUnreachable
    carrying the best attempt (largest total out-degree, earliest attempt
    on ties) with its deficit list for diagnosis.
    """
    hbase = h.base if isinstance(h, EscapeWay) else h
    ordering = degeneracy_ordering(f)
    if ordering.degeneracy > params.degeneracy_cap:
        raise DegeneracyCapExceeded(
            f"host degeneracy {ordering.degeneracy} exceeds cap {params.degeneracy_cap}"
        )
    g2 = orient_forward(f, hbase, ordering)
    gp = restrict_available(f, j, g2, hbase, forbidden_in)

    need: dict[int, int] = {}
    for v in range(f.n):
        avail = available_neighbors_in(f, j, hbase, v) - forbidden_in
        t = params.target(v, len(avail))
        if t > 0:
            need[v] = t

    best: Optional[ReservationOutcome] = None
    best_total = -1
    for attempt in range(1, params.max_retries + 1):
        rng = random.Random(_attempt_seed(params.rng_seed, attempt))
        sample = _sample(gp, params.p, rng)
        ew = clash_resolve(f, g2, sample, ordering)
        assert agrees(ew, hbase), "resolved reservation disagrees with its overlay"
        achieved = {v: len(ew.base.out_neighbors(v)) for v in ew.base.v_out()}
        deficits = tuple(v for v in sorted(need) if achieved.get(v, 0) < need[v])
        outcome = ReservationOutcome(
            escape_way=ew,
            achieved=achieved,
            deficits=deficits,
            retries_used=attempt,
            sampled=len(sample),
            kept=len(ew.base),
        )
        if not deficits:
            return outcome
        total = sum(achieved.values())
        if total > best_total:
            best, best_total = outcome, total
    assert best is not None
    raise TargetUnreachable(
        f"{len(best.deficits)} vertices missed their reservation target "
        f"after {params.max_retries} retries",
        best,
    )


# --- statistical probes ------------------------------------------------------

def survival_probability_probe(f: Graph, h: ArcSet, params: ReservationParams,
                               trials: int, delta: float = 0.15) -> dict[tuple[int, int], float]:
    """Empirical per-arc survival frequency through sample + clash_resolve.

    Asserts every arc of G' survives with frequency >= (1 - delta)/(e C^2);
    seeded, so a passing configuration stays passing.
    """
    assert trials >= 10**3, "survival estimates need at least 1000 trials"
    ordering = degeneracy_ordering(f)
    g2 = orient_forward(f, h, ordering)
    gp = restrict_available(f, f, g2, h)
    arcs = gp.sorted_arcs()
    hits = {a: 0 for a in arcs}
    for t in range(trials):
        rng = random.Random(_attempt_seed(params.rng_seed, t))
        sample = _sample(gp, params.p, rng)
        ew = clash_resolve(f, g2, sample, ordering)
        for a in ew.base.arcs():
            hits[a] += 1
    freq = {a: hits[a] / trials for a in arcs}
    c = params.degeneracy_cap
    threshold = (1.0 - delta) / (math.e * c * c)
    low = [(a, q) for a, q in sorted(freq.items()) if q < threshold]
    assert not low, f"arcs below survival threshold {threshold:.4f}: {low[:5]}"
    return freq


def lipschitz_probe(f: Graph, params: ReservationParams, trials: int) -> int:
    """Flip one sampled arc at a time and count how many kept-arc indicators
    change; on hosts with no subgraph of average degree above 3 the count
    never exceeds 8.  Returns the maximum observed influence.
    """
    h = ArcSet(f, [])
    ordering = degeneracy_ordering(f)
    g2 = orient_forward(f, h, ordering)
    gp = restrict_available(f, f, g2, h)
    arcs = gp.sorted_arcs()
    worst = 0
    for t in range(trials):
        rng = random.Random(_attempt_seed(params.rng_seed, t))
        coins = {a: rng.random() < params.p for a in arcs}
        base = clash_resolve(
            f, g2, ArcSet(f, [a for a in arcs if coins[a]]), ordering
        )
        base_arcs = set(base.base.arcs())
        for e in arcs:
            coins[e] = not coins[e]
            flipped = clash_resolve(
                f, g2, ArcSet(f, [a for a in arcs if coins[a]]), ordering
            )
            coins[e] = not coins[e]
            influence = len(base_arcs ^ set(flipped.base.arcs()))
            if influence > worst:
                worst = influence
    assert worst <= 8, f"single-arc influence {worst} exceeds 8"
    return worst

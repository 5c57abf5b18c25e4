"""Host generators and experiment pipelines.

Three families of machinery live here:

* seeded graph generators (binomial random graphs with geometric-skip
  sampling, pairing-model random regular graphs, a few fixed instances,
  and the counterexample constructions);
* the random-host preprocessing pipeline: cap the maximum degree, carve
  out small dense spots, peel to a minimum degree, with every deletion
  logged and replayable;
* the two-step Ramsey flow: compute the literal host parameters (which
  are astronomically infeasible and are reported, never allocated),
  build a shrunken host, colour its edges, and extract one colour class
  peeled to its minimum-degree target.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .graph import (
    Graph,
    build_graph,
    compact_subgraph,
    density_audit,
    is_spanning_subgraph,
    masked_subgraph,
)


class ExperimentError(RuntimeError):
    pass


class PipelineEmptied(ExperimentError):
    """The preprocessing pipeline deleted too much of the host."""

    def __init__(self, message: str, report: "PipelineReport"):
        self.report = report
        super().__init__(message)


class NoQualifyingClass(ExperimentError):
    pass


# --- generators ---------------------------------------------------------------


@dataclass(frozen=True)
class GnpParams:
    n: int
    edge_prob: Fraction
    seed: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        p = Fraction(self.edge_prob)
        if not (0 <= p <= 1):
            raise ValueError(f"edge probability {p} outside [0, 1]")

    @classmethod
    def with_expected_degree(cls, n: int, d: float, seed: int = 0) -> "GnpParams":
        """Edge probability d/n, the standard sparse parameterization."""
        assert n > 0
        p = Fraction(d) / n
        return cls(n=n, edge_prob=min(p, Fraction(1)), seed=seed)


def _pair_from_index(i: int, n: int) -> Tuple[int, int]:
    # lexicographic rank over pairs (u, v), u < v: block u holds n-1-u pairs
    u = int(n - 0.5 - math.sqrt((n - 0.5) ** 2 - 2 * i))
    offset = lambda a: a * n - a * (a + 1) // 2
    while u > 0 and i < offset(u):
        u -= 1
    while i >= offset(u + 1):
        u += 1
    v = i - offset(u) + u + 1
    assert 0 <= u < v < n
    return u, v


def gnp(params: GnpParams) -> Graph:
    """G(n, p), each pair an edge independently; geometric jumps between
    hits so the cost is proportional to the edge count, not the pair count."""
    n = params.n
    p = float(params.edge_prob)
    total = n * (n - 1) // 2
    edges: List[Tuple[int, int]] = []
    if p >= 1.0:
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    elif p > 0.0 and total > 0:
        rng = random.Random(params.seed)
        log_miss = math.log1p(-p)
        i = -1
        while True:
            gap = int(math.log(1.0 - rng.random()) / log_miss)
            i += gap + 1
            if i >= total:
                break
            edges.append(_pair_from_index(i, n))
    return build_graph(n, edges)


def random_regular(n: int, d: int, seed: int = 0, max_attempts: int = 64) -> Graph:
    """Pairing-model d-regular graph.

    A whole-pairing rejection step would succeed with probability about
    exp(-d^2/4), hopeless already at d = 8, so loops and repeated edges are
    instead repaired by degree-preserving pair swaps; a pairing that the
    swap budget cannot repair is redrawn."""
    if n < 1 or d < 0 or d >= n or (n * d) % 2 != 0:
        raise ValueError(f"no {d}-regular graph on {n} vertices")
    if d == 0:
        return build_graph(n, [])
    rng = random.Random(seed)
    points = [v for v in range(n) for _ in range(d)]
    key = lambda u, v: (u, v) if u < v else (v, u)
    for _ in range(max_attempts):
        rng.shuffle(points)
        pairs = [(points[k], points[k + 1]) for k in range(0, n * d, 2)]
        cnt: dict = {}
        for u, v in pairs:
            cnt[key(u, v)] = cnt.get(key(u, v), 0) + 1
        bad = [i for i, (u, v) in enumerate(pairs) if u == v or cnt[key(u, v)] > 1]
        budget = 50 * len(pairs)
        while bad and budget > 0:
            budget -= 1
            i = bad[-1]
            u, v = pairs[i]
            if u != v and cnt[key(u, v)] == 1:
                bad.pop()
                continue
            j = rng.randrange(len(pairs))
            if j == i:
                continue
            x, y = pairs[j]
            if rng.random() < 0.5:
                x, y = y, x
            a, b = (u, x), (v, y)
            if a[0] == a[1] or b[0] == b[1] or key(*a) == key(*b):
                continue
            cnt[key(u, v)] -= 1
            cnt[key(x, y)] -= 1
            if cnt.get(key(*a), 0) == 0 and cnt.get(key(*b), 0) == 0:
                cnt[key(*a)] = cnt.get(key(*a), 0) + 1
                cnt[key(*b)] = cnt.get(key(*b), 0) + 1
                pairs[i] = a
                pairs[j] = b
            else:
                cnt[key(u, v)] += 1
                cnt[key(x, y)] += 1
        if not any(u == v or cnt[key(u, v)] > 1 for u, v in pairs):
            return build_graph(n, [key(u, v) for u, v in pairs])
    raise ExperimentError(
        f"could not repair a pairing for n={n}, d={d} in {max_attempts} draws"
    )


def dodecahedron() -> Graph:
    """The 20-vertex 3-regular dodecahedral graph (degeneracy 3)."""
    edges = [
        (0, 1), (0, 10), (0, 19), (1, 2), (1, 8), (2, 3), (2, 6), (3, 4),
        (3, 19), (4, 5), (4, 17), (5, 6), (5, 15), (6, 7), (7, 8), (7, 14),
        (8, 9), (9, 10), (9, 13), (10, 11), (11, 12), (11, 18), (12, 13),
        (12, 16), (13, 14), (14, 15), (15, 16), (16, 17), (17, 18), (18, 19),
    ]
    g = build_graph(20, edges)
    assert g.max_degree() == 3 and g.min_degree() == 3
    return g


# --- counterexample constructions ---------------------------------------------


def _chord_cycle_pendants(length: int, d: int) -> Graph:
    if length < 4:
        raise ValueError("cycle length must be at least 4 for a proper chord")
    if d < 0:
        raise ValueError("pendant count must be nonnegative")
    edges = [(i, (i + 1) % length) for i in range(length)]
    edges.append((0, length // 2))
    n = length
    for c in range(length):
        for _ in range(d):
            edges.append((c, n))
            n += 1
    g = build_graph(n, edges)
    assert g.max_degree() == d + 3, "chord endpoints must reach degree d+3"
    if length <= 8:
        # every subgraph splits into a core part plus pendant vertices, and a
        # pendant contributes at most one edge while always adding a vertex,
        # so checking the 2^length core subsets covers every subgraph
        for mask in range(1, 1 << length):
            inside = [v for v in range(length) if mask >> v & 1]
            m = sum(
                1 for a in inside for b in g.adj[a] if b < length and b in inside
            ) // 2
            assert 2 * m < 3 * len(inside), (
                f"core subset {inside} has average degree >= 3"
            )
    return g


def _d_ary_tree(d: int, depth: int) -> Graph:
    if d < 1 or depth < 0:
        raise ValueError("need d >= 1 and depth >= 0")
    edges = []
    level = [0]
    n = 1
    for _ in range(depth):
        nxt = []
        for p in level:
            for _ in range(d):
                edges.append((p, n))
                nxt.append(n)
                n += 1
        level = nxt
    g = build_graph(n, edges)
    assert g.max_degree() <= d + 1
    return g


def _k22_blowup(d: int, radius: int) -> Graph:
    """Truncation of the (d/2)-regular tree with every vertex split into an
    independent pair and every edge blown up to a complete bipartite K22."""
    if d < 2 or d % 2 != 0:
        raise ValueError("blow-up degree d must be even and at least 2")
    if radius < 0:
        raise ValueError("truncation radius must be nonnegative")
    half = d // 2
    tree_edges: List[Tuple[int, int]] = []
    level = [0]
    n = 1
    for depth in range(radius):
        nxt = []
        for p in level:
            kids = half if depth == 0 else half - 1
            for _ in range(kids):
                tree_edges.append((p, n))
                nxt.append(n)
                n += 1
        level = nxt
    edges = []
    for u, v in tree_edges:
        for a in (2 * u, 2 * u + 1):
            for b in (2 * v, 2 * v + 1):
                edges.append((a, b))
    g = build_graph(2 * n, edges)
    tree_degree = [0] * n
    for u, v in tree_edges:
        tree_degree[u] += 1
        tree_degree[v] += 1
    for v in range(n):
        for half_vertex in (2 * v, 2 * v + 1):
            assert g.degree(half_vertex) == 2 * tree_degree[v], (
                "blow-up degree must double the tree degree"
            )
    if radius >= 1:
        assert g.max_degree() == d
    return g


def counterexample(kind: str, **params) -> Graph:
    """Constructions showing that simpler reservation schemes fail.

    kinds: chord-cycle-pendants(length, d), d-ary-tree(d, depth),
    k22-blowup(d, radius).
    """
    builders = {
        "chord-cycle-pendants": _chord_cycle_pendants,
        "d-ary-tree": _d_ary_tree,
        "k22-blowup": _k22_blowup,
    }
    if kind not in builders:
        raise ValueError(f"unknown counterexample kind {kind!r}")
    try:
        return builders[kind](**params)
    except TypeError as e:
        raise ValueError(f"bad parameters for {kind}: {e}") from e


# --- preprocessing pipeline -----------------------------------------------------


@dataclass(frozen=True)
class StageRecord:
    name: str
    parameter: str
    removed: Tuple[int, ...]
    rounds: int
    exhaustive: Optional[bool] = None  # stage (b): was the finder exhaustive?

    def to_record(self) -> dict:
        rec = {
            "name": self.name,
            "parameter": self.parameter,
            "removed": list(self.removed),
            "rounds": self.rounds,
        }
        if self.exhaustive is not None:
            rec["exhaustive"] = self.exhaustive
        return rec


@dataclass(frozen=True)
class PipelineReport:
    input_order: int
    input_edges: int
    d: int
    dense_cap: int
    stages: Tuple[StageRecord, ...]
    kept: Tuple[int, ...]
    output_edges: int
    paper_tree_order_bound: float
    paper_delta_bound: float

    def to_record(self) -> dict:
        return {
            "input_order": self.input_order,
            "input_edges": self.input_edges,
            "d": self.d,
            "dense_cap": self.dense_cap,
            "stages": [s.to_record() for s in self.stages],
            "kept_order": len(self.kept),
            "output_edges": self.output_edges,
            "paper_tree_order_bound": self.paper_tree_order_bound,
            "paper_delta_bound": self.paper_delta_bound,
        }


def default_dense_cap(n: int, d: int) -> int:
    """Size cap for the dense-spot stage: n / (200 d ln d)."""
    if d < 2:
        return n // 200 if d == 1 else 0
    return int(n / (200.0 * d * math.log(d)))


def preprocess_random(g: Graph, d: int, dense_cap: Optional[int] = None,
                      min_order: int = 1) -> Tuple[Graph, PipelineReport]:
    """Three-stage cleanup of a random host, every deletion logged.

    (a) delete vertices of degree above 20d; (b) repeatedly find and delete
    vertex sets up to the size cap whose induced average degree exceeds 12/5
    (exhaustive on tiny graphs, otherwise a sound-but-incomplete core
    heuristic, and the report says which); (c) peel to minimum degree d/16.
    The survivor is an induced-subgraph view of g on the original indices.
    """
    if d < 1:
        raise ValueError("degree parameter d must be positive")
    cap = default_dense_cap(g.n, d) if dense_cap is None else dense_cap
    alive = set(range(g.n))
    stages: List[StageRecord] = []

    # stage (a): degree cap
    limit = 20 * d
    dropped = tuple(sorted(v for v in alive if g.degree(v) > limit))
    alive -= set(dropped)
    stages.append(StageRecord("degree-cap", f"degree > {limit}", dropped, 1))

    # stage (b): dense spots
    removed_b: List[int] = []
    rounds = 0
    exhaustive = True
    threshold = Fraction(12, 5)
    if cap >= 2 and alive:
        while alive:
            cur, old = compact_subgraph(g, alive)
            exhaustive = exhaustive and cur.n <= 14
            witness = density_audit(cur, cap, threshold)
            if witness is None:
                break
            rounds += 1
            hit = [old[v] for v in witness.vertices]
            assert hit, "density witness must name live vertices"
            removed_b.extend(hit)
            alive -= set(hit)
    stages.append(StageRecord(
        "dense-spots", f"avg degree > 12/5 on <= {cap} vertices",
        tuple(sorted(removed_b)), rounds, exhaustive=exhaustive,
    ))

    # stage (c): peel to min degree d/16
    floor = Fraction(d, 16)
    removed_c: List[int] = []
    rounds_c = 0
    deg = {v: sum(1 for u in g.adj[v] if u in alive) for v in alive}
    frontier = [v for v in alive if deg[v] < floor]
    while frontier:
        batch = sorted(set(frontier) & alive)
        frontier = []
        if not batch:
            continue
        rounds_c += 1
        for v in batch:
            if v not in alive:
                continue
            alive.discard(v)
            removed_c.append(v)
            for u in g.adj[v]:
                if u in alive:
                    deg[u] -= 1
                    if deg[u] < floor:
                        frontier.append(u)
    stages.append(StageRecord(
        "min-degree-peel", f"degree < {floor}", tuple(sorted(removed_c)), rounds_c
    ))

    out = masked_subgraph(g, alive)
    report = PipelineReport(
        input_order=g.n,
        input_edges=g.m,
        d=d,
        dense_cap=cap,
        stages=tuple(stages),
        kept=tuple(sorted(alive)),
        output_edges=out.m,
        paper_tree_order_bound=(
            g.n / (1e14 * d * math.log(d) ** 2) if d >= 2 else 0.0
        ),
        paper_delta_bound=1e6 * math.log(d) if d >= 2 else 0.0,
    )
    if len(alive) < max(1, min_order):
        raise PipelineEmptied(
            f"pipeline kept {len(alive)} vertices, below minimum {max(1, min_order)}",
            report,
        )
    live_degrees = [out.degree(v) for v in alive]
    assert max(live_degrees) <= limit, "degree cap violated after pipeline"
    assert min(live_degrees) >= floor, "degree floor violated after pipeline"
    return out, report


# --- Ramsey host construction ----------------------------------------------------


@dataclass(frozen=True)
class RamseyHostParams:
    delta: int
    epsilon: Fraction
    n: int               # target tree order
    q: int = 2
    seed: int = 0
    shrink: float = 0.05  # exponent scale on the two constant prefactors
    min_host_order: int = 64

    def __post_init__(self):
        eps = Fraction(self.epsilon)
        if not (0 < eps <= 1):
            raise ValueError(f"epsilon {eps} outside (0, 1]")
        if self.delta < 1 or self.n < 1 or self.q < 1:
            raise ValueError("delta, n and q must be positive")
        if not (0 <= self.shrink <= 1):
            raise ValueError("shrink factor must lie in [0, 1]")


def literal_ramsey_values(delta: int, epsilon: Fraction, n: int) -> Tuple[int, int]:
    """The stated host order and degree, rounded to integers.

    order: 10^30 n log(delta) delta^2 log(1/eps)^3 / eps
    degree: 10^12 delta log(1/eps) / eps
    Natural logs; the degenerate corners (delta = 1, eps = 1) substitute 1
    for a log factor that would otherwise zero everything out.
    """
    eps = Fraction(epsilon)
    log_delta = math.log(delta) if delta >= 2 else 1.0
    log_eps = math.log(1.0 / float(eps)) if eps < 1 else 1.0
    order = 10 ** 30 * n * log_delta * delta ** 2 * log_eps ** 3 / float(eps)
    degree = 10 ** 12 * delta * log_eps / float(eps)
    return int(order), int(degree)


@dataclass(frozen=True)
class HostReport:
    params_record: dict
    literal_order: int
    literal_degree: int
    host_order: int
    host_degree: int
    pipeline: PipelineReport

    def to_record(self) -> dict:
        return {
            "params": self.params_record,
            "literal_order": self.literal_order,
            "literal_degree": self.literal_degree,
            "host_order": self.host_order,
            "host_degree": self.host_degree,
            "pipeline": self.pipeline.to_record(),
        }


def ramsey_host(params: RamseyHostParams) -> Tuple[Graph, HostReport]:
    """Shrunken Ramsey host plus a report carrying the literal values.

    The literal order and degree are computed and recorded but never
    allocated.  The shrink factor scales the exponents of the two constant
    prefactors (10^30 and 10^12), so 1.0 asks for the literal host and 0
    strips the prefactors entirely; construction then runs the standard
    preprocessing pipeline at the scaled degree.
    """
    lit_order, lit_degree = literal_ramsey_values(params.delta, params.epsilon, params.n)
    s = params.shrink
    scale_order = 10.0 ** (30.0 * (s - 1.0))
    scale_degree = 10.0 ** (12.0 * (s - 1.0))
    host_order = max(params.min_host_order, int(round(lit_order * scale_order)))
    host_degree = max(2, int(round(lit_degree * scale_degree)))
    if host_order > 10 ** 7:
        raise ExperimentError(
            f"scaled host order {host_order} is still too large to allocate; "
            f"lower the shrink factor"
        )
    g = gnp(GnpParams.with_expected_degree(host_order, host_degree, params.seed))
    survivor, pipeline = preprocess_random(g, host_degree)
    report = HostReport(
        params_record={
            "delta": params.delta,
            "epsilon": str(Fraction(params.epsilon)),
            "n": params.n,
            "q": params.q,
            "seed": params.seed,
            "shrink": params.shrink,
        },
        literal_order=lit_order,
        literal_degree=lit_degree,
        host_order=host_order,
        host_degree=host_degree,
        pipeline=pipeline,
    )
    return survivor, report


# --- edge colouring and class extraction ------------------------------------------


@dataclass(frozen=True)
class ColoringPolicy:
    kind: str            # random | greedy-adversarial | scripted
    q: int
    seed: int = 0
    script: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.kind not in ("random", "greedy-adversarial", "scripted"):
            raise ValueError(f"unknown colouring policy {self.kind!r}")
        if self.q < 1:
            raise ValueError("need at least one colour")
        if self.kind == "scripted" and self.script is None:
            raise ValueError("scripted policy needs a script")


def _colour_edges(g: Graph, policy: ColoringPolicy) -> List[int]:
    edges = list(g.edges())
    if policy.kind == "scripted":
        script = list(policy.script)
        if len(script) != len(edges):
            raise ValueError(
                f"script colours {len(script)} edges, host has {len(edges)}"
            )
        bad = [c for c in script if not (0 <= c < policy.q)]
        if bad:
            raise ValueError(f"script uses colours outside 0..{policy.q - 1}")
        return script
    if policy.kind == "random":
        rng = random.Random(policy.seed)
        return [rng.randrange(policy.q) for _ in edges]
    # greedy-adversarial: concentrate colour 0 on the densest spot we can
    # find cheaply (iterated high-degree core), pad it to the pigeonhole
    # minimum, and spread everything else round-robin over the other colours
    alive = set(range(g.n))
    deg = {v: g.degree(v) for v in alive}
    while True:
        avg = sum(deg[v] for v in alive) / max(len(alive), 1)
        weak = [v for v in alive if deg[v] < avg]
        if not weak or len(alive) <= 2:
            break
        for v in weak:
            alive.discard(v)
            for u in g.adj[v]:
                if u in alive:
                    deg[u] -= 1
    colours = []
    spill = 0
    for u, v in edges:
        if u in alive and v in alive:
            colours.append(0)
        elif policy.q == 1:
            colours.append(0)
        else:
            colours.append(1 + spill % (policy.q - 1))
            spill += 1
    if policy.q > 1:
        need = -(-len(edges) // policy.q)  # ceil: pigeonhole minimum
        have = sum(1 for c in colours if c == 0)
        for i in range(len(edges)):
            if have >= need:
                break
            if colours[i] != 0:
                colours[i] = 0
                have += 1
    return colours


@dataclass(frozen=True)
class ExtractionResult:
    j: Graph                       # spanning view of the host, peeled
    colour: int
    class_edges: int
    total_edges: int
    colour_sizes: Tuple[int, ...]
    min_degree_target: Fraction
    peel_trace: Tuple[Tuple[int, ...], ...]   # vertices removed per round
    survivors: Tuple[int, ...]

    def to_record(self) -> dict:
        return {
            "colour": self.colour,
            "class_edges": self.class_edges,
            "total_edges": self.total_edges,
            "colour_sizes": list(self.colour_sizes),
            "min_degree_target": str(self.min_degree_target),
            "peel_rounds": len(self.peel_trace),
            "peeled_vertices": sum(len(r) for r in self.peel_trace),
            "survivor_order": len(self.survivors),
        }


def color_and_extract(g: Graph, policy: ColoringPolicy, epsilon: Fraction,
                      d: int) -> ExtractionResult:
    """Colour the edges, take the biggest colour class with at least
    epsilon * e(g) edges, and peel it to minimum degree epsilon * d / 20.

    The class is returned as a spanning-subgraph view of g (peeled vertices
    go silent rather than being reindexed).  A qualifying class always
    exists when epsilon <= 1/q; scripted colourings may break that
    precondition, and then NoQualifyingClass reports the shortfall.
    """
    eps = Fraction(epsilon)
    colours = _colour_edges(g, policy)
    edges = list(g.edges())
    sizes = [0] * policy.q
    for c in colours:
        sizes[c] += 1
    best = max(range(policy.q), key=lambda c: (sizes[c], -c))
    needed = eps * len(edges)
    if sizes[best] < needed:
        raise NoQualifyingClass(
            f"largest colour class has {sizes[best]} edges, "
            f"needs at least {needed} = epsilon * e(g)"
        )
    class_edges = [e for e, c in zip(edges, colours) if c == best]
    j_full = build_graph(g.n, class_edges)
    assert is_spanning_subgraph(j_full, g)

    target = eps * Fraction(d, 20)
    alive = {v for v in range(g.n) if j_full.degree(v) > 0}
    deg = {v: j_full.degree(v) for v in alive}
    trace: List[Tuple[int, ...]] = []
    while True:
        weak = sorted(v for v in alive if deg[v] < target)
        if not weak:
            break
        trace.append(tuple(weak))
        for v in weak:
            alive.discard(v)
            for u in j_full.adj[v]:
                if u in alive:
                    deg[u] -= 1
    j = masked_subgraph(j_full, alive)
    if alive:
        assert min(j.degree(v) for v in alive) >= target
    return ExtractionResult(
        j=j,
        colour=best,
        class_edges=sizes[best],
        total_edges=len(edges),
        colour_sizes=tuple(sizes),
        min_degree_target=target,
        peel_trace=tuple(trace),
        survivors=tuple(sorted(alive)),
    )

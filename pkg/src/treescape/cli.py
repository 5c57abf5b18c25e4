"""Command line surface.

Four subcommands: gen writes host graphs, embed plays embedding games
and reports per-trial outcomes, ramsey runs the colour-and-extract
pipeline on a shrunken host, verify re-checks stored embeddings.

Exit codes are a stable contract: 0 success, 1 hypothesis refusal,
2 embedding or verification failure, 3 configuration error.  Same
config and seed produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional

from .adversaries import make_adversary
from .embedder import (
    EmbedError,
    GameConfig,
    HypothesisRefused,
    run_game,
)
from .experiments import (
    ColoringPolicy,
    ExperimentError,
    GnpParams,
    NoQualifyingClass,
    PipelineEmptied,
    RamseyHostParams,
    color_and_extract,
    counterexample,
    dodecahedron,
    gnp,
    preprocess_random,
    ramsey_host,
    random_regular,
)
from .graph import read_edge_list, write_edge_list
from .oracle import BudgetExhausted, Embedding, OracleBudget, brute_force_induced_embed
from .reports import ExperimentReport, dot_export, dumps_record, trial_from_result
from .trees import TreeSpec, tree_family, tree_from_edges


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _write(out_dir: Optional[str], name: str, text: str) -> Optional[str]:
    if out_dir is None:
        return None
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w") as fh:
        fh.write(text)
    return path


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"bad fraction {text!r}: {e}") from e


def _trial_seed(seed: int, trial: int) -> int:
    return seed * 1_000_003 + trial


# --- gen -------------------------------------------------------------------------


def _add_gen(sub) -> None:
    p = sub.add_parser("gen", help="generate a host graph and write its edge list")
    p.add_argument("--family", required=True,
                   choices=["gnp", "regular", "dodecahedron", "counterexample"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--d", type=int, default=None, help="expected or exact degree")
    p.add_argument("--p", type=str, default=None, help="edge probability as a fraction")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", type=str, default=None,
                   help="counterexample kind: chord-cycle-pendants, d-ary-tree, k22-blowup")
    p.add_argument("--length", type=int, default=None)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--out", type=str, default=None, help="output directory")


def cmd_gen(args) -> int:
    if args.family == "gnp":
        if args.n is None:
            raise ConfigError("gnp needs --n")
        if (args.d is None) == (args.p is None):
            raise ConfigError("gnp needs exactly one of --d or --p")
        if args.p is not None:
            params = GnpParams(args.n, _parse_fraction(args.p), args.seed)
        else:
            params = GnpParams.with_expected_degree(args.n, args.d, args.seed)
        g = gnp(params)
        slug = f"gnp_n{args.n}_p{str(params.edge_prob).replace('/', 'over')}_s{args.seed}"
    elif args.family == "regular":
        if args.n is None or args.d is None:
            raise ConfigError("regular needs --n and --d")
        g = random_regular(args.n, args.d, args.seed)
        slug = f"regular_n{args.n}_d{args.d}_s{args.seed}"
    elif args.family == "dodecahedron":
        g = dodecahedron()
        slug = "dodecahedron"
    else:
        if args.kind is None:
            raise ConfigError("counterexample needs --kind")
        params = {}
        if args.kind == "chord-cycle-pendants":
            if args.length is None or args.d is None:
                raise ConfigError("chord-cycle-pendants needs --length and --d")
            params = {"length": args.length, "d": args.d}
        elif args.kind == "d-ary-tree":
            if args.d is None or args.depth is None:
                raise ConfigError("d-ary-tree needs --d and --depth")
            params = {"d": args.d, "depth": args.depth}
        elif args.kind == "k22-blowup":
            if args.d is None or args.radius is None:
                raise ConfigError("k22-blowup needs --d and --radius")
            params = {"d": args.d, "radius": args.radius}
        else:
            raise ConfigError(f"unknown counterexample kind {args.kind!r}")
        try:
            g = counterexample(args.kind, **params)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        bits = "_".join(f"{k}{v}" for k, v in sorted(params.items()))
        slug = f"{args.kind.replace('-', '_')}_{bits}"
    out_dir = args.out or "."
    path = os.path.join(out_dir, f"{slug}.edges")
    os.makedirs(out_dir, exist_ok=True)
    write_edge_list(g, path)
    print(f"wrote {path}: {g.n} vertices, {g.m} edges")
    return 0


# --- embed -----------------------------------------------------------------------


def _add_embed(sub) -> None:
    p = sub.add_parser("embed", help="play embedding games on a host graph")
    p.add_argument("--graph", required=True, help="host edge-list file")
    p.add_argument("--subgraph", default=None,
                   help="edge-list file of the spanning subgraph carrying tree edges")
    p.add_argument("--mode", choices=["paper", "practical"], default="practical")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--d", type=int, default=None,
                   help="criticality threshold; default: host max degree + 1")
    p.add_argument("--tree", default="random",
                   help="tree family (random, path, star, ary) or an edge-list file")
    p.add_argument("--tree-size", type=int, default=20)
    p.add_argument("--adversary", default="random",
                   help="dfs, bfs, random, hostile, or a script file")
    p.add_argument("--sample-prob", type=str, default=None,
                   help="arc keep probability during reservation; default 1/C^2")
    p.add_argument("--retries", type=int, default=64,
                   help="reservation resampling budget")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--preprocess", type=int, default=None, metavar="D",
                   help="run the random-host pipeline at degree D first")
    p.add_argument("--dot", action="store_true", help="write DOT files for successes")
    p.add_argument("--save-embeddings", action="store_true")
    p.add_argument("--out", type=str, default=None)


def _resolve_tree(args, seed: int) -> TreeSpec:
    try:
        if args.tree in ("random", "path", "star", "ary"):
            return tree_family(args.tree, args.tree_size, args.delta, seed)
        if not os.path.exists(args.tree):
            raise ConfigError(f"tree family or file {args.tree!r} not found")
        g = read_edge_list(args.tree)
        spec = tree_from_edges(list(g.edges()))
        spec.validate_max_degree(args.delta)
        return spec
    except (ValueError, TypeError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"bad tree request: {e}") from e


def _resolve_adversary(args, spec: TreeSpec, seed: int):
    if args.adversary in ("dfs", "bfs", "random", "hostile"):
        return make_adversary(args.adversary, spec, seed)
    if not os.path.exists(args.adversary):
        raise ConfigError(f"adversary policy or script {args.adversary!r} not found")
    with open(args.adversary) as fh:
        return make_adversary("scripted", spec, seed, script=fh.read())


def cmd_embed(args) -> int:
    g = read_edge_list(args.graph)
    pipeline_record = None
    if args.preprocess is not None:
        try:
            g, pipeline_report = preprocess_random(g, args.preprocess)
        except PipelineEmptied as e:
            print(f"preprocess emptied the host: {e}", file=sys.stderr)
            return 2
        pipeline_record = pipeline_report.to_record()
    j = read_edge_list(args.subgraph) if args.subgraph else g
    if j.n != g.n:
        raise ConfigError(
            f"subgraph has {j.n} vertices, host has {g.n}; they must match"
        )
    d = args.d
    if d is None and args.mode == "practical":
        d = g.max_degree() + 1
    sample_prob = float(_parse_fraction(args.sample_prob)) if args.sample_prob else None
    config_record = {
        "command": "embed",
        "graph": args.graph,
        "subgraph": args.subgraph,
        "mode": args.mode,
        "delta": args.delta,
        "d": d,
        "tree": args.tree,
        "tree_size": args.tree_size,
        "adversary": args.adversary,
        "sample_prob": sample_prob,
        "retries": args.retries,
        "trials": args.trials,
        "seed": args.seed,
        "preprocess": args.preprocess,
    }
    _write(args.out, "config.json", dumps_record(config_record))
    report = ExperimentReport(config=config_record)
    embeddings = []
    for t in range(args.trials):
        seed_t = _trial_seed(args.seed, t)
        spec = _resolve_tree(args, seed_t)
        adversary = _resolve_adversary(args, spec, seed_t)
        config = GameConfig(delta=args.delta, mode=args.mode, d=d, seed=seed_t,
                            sample_prob=sample_prob, max_retries=args.retries)
        try:
            result = run_game(g, j, config, adversary, target_n=spec.size)
        except HypothesisRefused as e:
            refusal = {
                "config": config_record,
                "refused": True,
                "hypothesis": e.hypothesis,
                "detail": str(e),
            }
            _write(args.out, "report.json", dumps_record(refusal))
            print(f"hypothesis refused: {e}")
            return 1
        record = trial_from_result(t, seed_t, result)
        report.add(record)
        status = "ok" if record.success else f"FAIL ({record.error})"
        print(f"trial {t}: {status}, {record.tree_nodes} nodes, "
              f"{record.steps} steps")
        if record.success and args.dot and args.out:
            _write(args.out, f"trial_{t}.dot", dot_export(result.state))
        if record.success and args.save_embeddings:
            # Export the tree the game actually built.  Node ids follow the
            # adversary's visit order, not the requested spec's numbering,
            # and may have gaps after rollbacks, so relabel by rank.
            live = sorted(result.state.image_of)
            rank = {v: i for i, v in enumerate(live)}
            parent = [-1] + [rank[result.state.node_parent[v]]
                             for v in live[1:]]
            embeddings.append({
                "trial": t,
                "tree_parent": parent,
                "mapping": [result.state.image_of[v] for v in live],
            })
    record = report.to_record()
    if pipeline_record is not None:
        record["pipeline"] = pipeline_record
    _write(args.out, "report.json", dumps_record(record))
    if args.save_embeddings:
        _write(args.out, "embeddings.json", dumps_record({"embeddings": embeddings}))
    lo, hi = report.confidence_interval()
    print(f"{report.successes}/{len(report.trials)} trials succeeded "
          f"(95% CI {lo:.3f}..{hi:.3f})")
    ok = report.successes == len(report.trials) and report.all_successes_certified()
    return 0 if ok else 2


# --- ramsey ----------------------------------------------------------------------


def _add_ramsey(sub) -> None:
    p = sub.add_parser("ramsey", help="colour a shrunken host and embed from one class")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--q", type=int, default=2, help="colour count")
    p.add_argument("--epsilon", type=str, default=None,
                   help="class fraction; default 1/q")
    p.add_argument("--tree-size", type=int, default=20)
    p.add_argument("--shrink", type=float, default=0.05,
                   help="exponent scale on the constant prefactors")
    p.add_argument("--policy", default="random",
                   choices=["random", "greedy-adversarial"])
    p.add_argument("--adversary", default="random",
                   help="dfs, bfs, random, or hostile")
    p.add_argument("--d", type=int, default=None,
                   help="criticality threshold; default: host max degree + 1")
    p.add_argument("--sample-prob", type=str, default=None,
                   help="arc keep probability during reservation; default 1/C^2")
    p.add_argument("--retries", type=int, default=64,
                   help="reservation resampling budget")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, default=None)


def cmd_ramsey(args) -> int:
    eps = _parse_fraction(args.epsilon) if args.epsilon else Fraction(1, args.q)
    params = RamseyHostParams(
        delta=args.delta, epsilon=eps, n=args.tree_size, q=args.q,
        seed=args.seed, shrink=args.shrink,
    )
    try:
        host, host_report = ramsey_host(params)
    except (PipelineEmptied, ExperimentError) as e:
        print(f"host construction failed: {e}", file=sys.stderr)
        return 2
    d = args.d if args.d is not None else host.max_degree() + 1
    sample_prob = float(_parse_fraction(args.sample_prob)) if args.sample_prob else None
    config_record = {
        "command": "ramsey",
        "delta": args.delta,
        "q": args.q,
        "epsilon": str(eps),
        "tree_size": args.tree_size,
        "shrink": args.shrink,
        "policy": args.policy,
        "adversary": args.adversary,
        "d": d,
        "sample_prob": sample_prob,
        "retries": args.retries,
        "trials": args.trials,
        "seed": args.seed,
    }
    _write(args.out, "config.json", dumps_record(config_record))
    report = ExperimentReport(config=config_record)
    for t in range(args.trials):
        seed_t = _trial_seed(args.seed, t)
        policy = ColoringPolicy(kind=args.policy, q=args.q, seed=seed_t)
        try:
            extraction = color_and_extract(host, policy, eps, host_report.host_degree)
        except NoQualifyingClass as e:
            print(f"trial {t}: no qualifying colour class: {e}", file=sys.stderr)
            return 2
        spec = tree_family("random", args.tree_size, args.delta, seed_t)
        adversary = make_adversary(args.adversary, spec, seed_t)
        config = GameConfig(delta=args.delta, mode="practical", d=d, seed=seed_t,
                            sample_prob=sample_prob, max_retries=args.retries)
        result = run_game(host, extraction.j, config, adversary, target_n=spec.size)
        record = trial_from_result(t, seed_t, result, extra=extraction.to_record())
        report.add(record)
        status = "ok" if record.success else f"FAIL ({record.error})"
        print(f"trial {t}: colour {extraction.colour} "
              f"({extraction.class_edges}/{extraction.total_edges} edges), {status}")
    record = report.to_record()
    record["host"] = host_report.to_record()
    _write(args.out, "report.json", dumps_record(record))
    lo, hi = report.confidence_interval()
    print(f"{report.successes}/{len(report.trials)} trials succeeded "
          f"(95% CI {lo:.3f}..{hi:.3f})")
    ok = report.successes == len(report.trials) and report.all_successes_certified()
    return 0 if ok else 2


# --- verify ----------------------------------------------------------------------


def _add_verify(sub) -> None:
    p = sub.add_parser("verify", help="re-check stored embeddings against their host")
    p.add_argument("--graph", required=True)
    p.add_argument("--subgraph", default=None)
    p.add_argument("--embeddings", required=True,
                   help="embeddings.json written by embed --save-embeddings")
    p.add_argument("--oracle", action="store_true",
                   help="also re-find each tree with the brute-force search")
    p.add_argument("--out", type=str, default=None)


def cmd_verify(args) -> int:
    g = read_edge_list(args.graph)
    j = read_edge_list(args.subgraph) if args.subgraph else g
    with open(args.embeddings) as fh:
        data = json.load(fh)
    items = data["embeddings"] if isinstance(data, dict) else data
    results = []
    failures = 0
    for item in items:
        spec = TreeSpec(tuple(item["tree_parent"]))
        emb = Embedding(tuple(item["mapping"]))
        violations = emb.check(g, j, spec)
        entry = {
            "trial": item.get("trial"),
            "ok": not violations,
            "violations": violations,
        }
        if args.oracle:
            if g.n > 60:
                entry["oracle"] = "skipped: host larger than 60 vertices"
            else:
                try:
                    found = brute_force_induced_embed(
                        g, j, spec, OracleBudget(max_vertices=60)
                    )
                    entry["oracle"] = "confirmed" if found else "no embedding exists"
                    if found is None:
                        entry["ok"] = False
                except BudgetExhausted as e:
                    entry["oracle"] = f"budget exhausted: {e}"
        if not entry["ok"]:
            failures += 1
        results.append(entry)
        label = "ok" if entry["ok"] else f"FAIL {violations}"
        print(f"embedding {entry['trial']}: {label}")
    summary = {
        "graph": args.graph,
        "subgraph": args.subgraph,
        "checked": len(results),
        "failures": failures,
        "results": results,
    }
    _write(args.out, "verify.json", dumps_record(summary))
    print(f"{len(results) - failures}/{len(results)} embeddings verified")
    return 0 if failures == 0 else 2


# --- entry point -------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="treescape",
                     description="induced tree embedding games and experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_gen(sub)
    _add_embed(sub)
    _add_ramsey(sub)
    _add_verify(sub)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "embed":
            return cmd_embed(args)
        if args.command == "ramsey":
            return cmd_ramsey(args)
        if args.command == "verify":
            return cmd_verify(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 3
    except FileNotFoundError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 3
    except HypothesisRefused as e:
        print(f"hypothesis refused: {e}", file=sys.stderr)
        return 1
    except EmbedError as e:
        # parameter validation raised outside a game; a config problem
        print(f"config error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

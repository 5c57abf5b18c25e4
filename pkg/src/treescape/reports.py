"""Structured run reports: per-trial records, aggregate frequencies with
exact binomial confidence intervals, JSON serialization, and the DOT
emitter for finished games.  Everything here is deterministic given the
inputs; no timestamps, and JSON keys are always sorted."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from scipy.stats import beta

from .embedder import EmbedState, GameResult, InducednessCertificate


def clopper_pearson(successes: int, trials: int,
                    alpha: float = 0.05) -> Tuple[float, float]:
    """Exact binomial confidence interval at level 1 - alpha."""
    assert 0 <= successes <= trials
    if trials == 0:
        return 0.0, 1.0
    lo = 0.0 if successes == 0 else float(
        beta.ppf(alpha / 2, successes, trials - successes + 1)
    )
    hi = 1.0 if successes == trials else float(
        beta.ppf(1 - alpha / 2, successes + 1, trials - successes)
    )
    return lo, hi


def certificate_record(cert: Optional[InducednessCertificate]) -> Optional[dict]:
    if cert is None:
        return None
    return {
        "tree_nodes": cert.tree_nodes,
        "tree_edges_checked": cert.tree_edges_checked,
        "non_adjacent_pairs_checked": cert.non_adjacent_pairs_checked,
        "violations": list(cert.violations),
        "ok": cert.ok,
    }


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    success: bool
    steps: int
    tree_nodes: int
    reservation_retries: int
    cascade_sizes: Tuple[int, ...]
    error: Optional[str]
    certificate: Optional[dict]
    extra: Optional[dict] = None

    def to_record(self) -> dict:
        rec = {
            "trial": self.trial,
            "seed": self.seed,
            "success": self.success,
            "steps": self.steps,
            "tree_nodes": self.tree_nodes,
            "reservation_retries": self.reservation_retries,
            "cascade_sizes": list(self.cascade_sizes),
            "error": self.error,
            "certificate": self.certificate,
        }
        if self.extra:
            rec["extra"] = self.extra
        return rec


def trial_from_result(trial: int, seed: int, result: GameResult,
                      extra: Optional[dict] = None) -> TrialRecord:
    retries = 0
    cascades: List[int] = []
    for ev in result.events:
        if ev.get("type") == "extend" and ev.get("case") == 2:
            retries += ev.get("retries", 0)
            cascades.append(ev.get("cstar", 0))
    return TrialRecord(
        trial=trial,
        seed=seed,
        success=result.success,
        steps=result.state.step if result.state is not None else 0,
        tree_nodes=result.state.tree_size if result.state is not None else 0,
        reservation_retries=retries,
        cascade_sizes=tuple(cascades),
        error=f"{type(result.error).__name__}: {result.error}" if result.error else None,
        certificate=certificate_record(result.certificate),
        extra=extra,
    )


@dataclass
class ExperimentReport:
    config: Dict[str, object]
    trials: List[TrialRecord] = field(default_factory=list)
    alpha: float = 0.05

    def add(self, record: TrialRecord) -> None:
        self.trials.append(record)

    @property
    def successes(self) -> int:
        return sum(1 for t in self.trials if t.success)

    @property
    def frequency(self) -> float:
        return self.successes / len(self.trials) if self.trials else 0.0

    def confidence_interval(self) -> Tuple[float, float]:
        return clopper_pearson(self.successes, len(self.trials), self.alpha)

    def all_successes_certified(self) -> bool:
        return all(
            t.certificate is not None and t.certificate.get("ok")
            for t in self.trials if t.success
        )

    def to_record(self) -> dict:
        lo, hi = self.confidence_interval()
        trials = sorted(self.trials, key=lambda t: t.trial)
        return {
            "config": self.config,
            "trials": [t.to_record() for t in trials],
            "trial_count": len(trials),
            "successes": self.successes,
            "success_frequency": self.frequency,
            "ci_alpha": self.alpha,
            "ci_low": lo,
            "ci_high": hi,
            "all_successes_certified": self.all_successes_certified(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), sort_keys=True, indent=2) + "\n"


def dumps_record(record: dict) -> str:
    return json.dumps(record, sort_keys=True, indent=2) + "\n"


# --- DOT export ----------------------------------------------------------------


def dot_export(state: EmbedState) -> str:
    """The finished overlay as Graphviz DOT: tree arcs solid and bold,
    remaining reserve arcs dashed, critical vertices filled, tree images
    boxed and labeled by their node id."""
    lines = ["digraph embedding {", "  rankdir=LR;", '  node [shape=circle];']
    crit = state.crit.members
    images = {img: node for node, img in state.image_of.items()}
    shown = set()

    def show(v: int) -> None:
        if v in shown:
            return
        shown.add(v)
        attrs = []
        if v in images:
            attrs.append("shape=box")
            attrs.append(f'label="v{v}\\nnode {images[v]}"')
        else:
            attrs.append(f'label="v{v}"')
        if v in crit:
            attrs.append("style=filled")
            attrs.append("fillcolor=lightgray")
        lines.append(f'  {v} [{", ".join(attrs)}];')

    tree_arcs = set()
    for node, par in sorted(state.node_parent.items()):
        if par >= 0:
            tree_arcs.add((state.image_of[par], state.image_of[node]))
    for u, v in sorted(state.bway.base.arcs()):
        show(u)
        show(v)
        if (u, v) in tree_arcs:
            lines.append(f"  {u} -> {v} [style=bold];")
        else:
            lines.append(f"  {u} -> {v} [style=dashed];")
    for img in sorted(images):
        show(img)
    lines.append("}")
    return "\n".join(lines) + "\n"

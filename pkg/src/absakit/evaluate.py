"""Exact-match micro precision/recall/F1 per task, plus the cross-task
average row.

Counts accumulate associatively: partial (tp, n_pred, n_gold) triples from
parallel shards can be merged by addition before the final division.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import IMPLICIT, AbsaError


class LengthMismatch(AbsaError):
    """Prediction and gold lists of different lengths."""


class TaskSetMismatch(AbsaError):
    """Different task sets on the prediction and gold side."""


@dataclass(frozen=True)
class TaskMetrics:
    tp: int
    n_pred: int
    n_gold: int

    @property
    def precision(self) -> float:
        return self.tp / self.n_pred if self.n_pred else 0.0

    @property
    def recall(self) -> float:
        return self.tp / self.n_gold if self.n_gold else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r > 0 else 0.0

    def merged(self, other: "TaskMetrics") -> "TaskMetrics":
        return TaskMetrics(
            self.tp + other.tp,
            self.n_pred + other.n_pred,
            self.n_gold + other.n_gold,
        )


@dataclass
class EvalReport:
    per_task: dict
    parse_failure_count: int = 0

    @property
    def average_f1(self) -> float:
        if not self.per_task:
            return 0.0
        return sum(m.f1 for m in self.per_task.values()) / len(self.per_task)


def _normalize(t, case_insensitive=False):
    out = []
    for slot in t:
        if slot is IMPLICIT:
            out.append(slot)
        else:
            slot = slot.strip()
            out.append(slot.lower() if case_insensitive else slot)
    return tuple(out)


def score_task(preds, golds, case_insensitive=False) -> TaskMetrics:
    """Micro counts over aligned instance-level tuple collections.

    Predicted tuples are de-duplicated per instance before counting; term
    comparison is exact after whitespace trimming (case-sensitive unless
    ``case_insensitive``).
    """
    if len(preds) != len(golds):
        raise LengthMismatch(f"{len(preds)} predictions vs {len(golds)} golds")
    tp = n_pred = n_gold = 0
    for p, g in zip(preds, golds):
        pset = {_normalize(t, case_insensitive) for t in p}
        gset = {_normalize(t, case_insensitive) for t in g}
        tp += len(pset & gset)
        n_pred += len(pset)
        n_gold += len(gset)
    return TaskMetrics(tp, n_pred, n_gold)


def score_run(
    predictions: dict, golds: dict, parse_failure_count=0, case_insensitive=False
) -> EvalReport:
    """Per-task metrics plus the unweighted mean F1 across evaluated tasks."""
    if set(predictions) != set(golds):
        raise TaskSetMismatch(
            f"prediction tasks {sorted(predictions)} != gold tasks {sorted(golds)}"
        )
    per_task = {
        name: score_task(predictions[name], golds[name], case_insensitive)
        for name in predictions
    }
    return EvalReport(per_task=per_task, parse_failure_count=parse_failure_count)


def format_report(report: EvalReport, title: str = "") -> str:
    """Plain-text table: one row per task, then the Ave. row."""
    lines = []
    if title:
        lines.append(title)
    header = f"{'Task':<8} {'P':>8} {'R':>8} {'F1':>8}"
    lines.append(header)
    lines.append("-" * len(header))
    for name, m in report.per_task.items():
        lines.append(
            f"{name:<8} {100 * m.precision:>8.2f} {100 * m.recall:>8.2f} "
            f"{100 * m.f1:>8.2f}"
        )
    lines.append("-" * len(header))
    lines.append(f"{'Ave.':<8} {'':>8} {'':>8} {100 * report.average_f1:>8.2f}")
    if report.parse_failure_count:
        lines.append(f"parse failures: {report.parse_failure_count}")
    return "\n".join(lines)

"""Convert quadruple-annotated reviews into labeled instances for the 11
tasks: projection, de-duplication, implicit-term filtering, anchor
expansion, and K-shot review subsampling.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Optional

from .core import IMPLICIT, AbsaError, AcosQuad, Review, TaskKind, get_task, project
from .data_io import (
    IMPLICIT_MARKER,
    DatasetManifest,
    SchemaViolation,
    _require,
    _term_from_json,
    _term_to_json,
)


class KTooLarge(AbsaError):
    """K-shot request exceeding the split size."""


@dataclass(frozen=True)
class ShotConfig:
    """K-shot sampling parameters: review count and RNG seed."""

    k: int
    seed: int = 0


@dataclass(frozen=True)
class TaskInstance:
    """One derived training/eval example.

    ``given`` is the anchor for ABSC/AOOE (explicit aspect term) and COSC
    (canonical category), else None.  ``targets`` is the de-duplicated tuple
    set, in first-occurrence order.
    """

    id: str
    review: Review
    task: TaskKind
    targets: tuple
    given: Optional[str] = None


def _keep(quad: AcosQuad, signature: str) -> bool:
    # Implicit rule: an implicit aspect survives only when the category
    # anchors it (C in signature); an implicit opinion only when the
    # sentiment does (S in signature).
    if quad.aspect is IMPLICIT and "A" in signature and "C" not in signature:
        return False
    if quad.opinion is IMPLICIT and "O" in signature and "S" not in signature:
        return False
    return True


def _dedupe(tuples):
    return tuple(dict.fromkeys(tuples))


def derive(review: Review, task: TaskKind) -> list:
    """Derive the instances a review contributes to a task.

    Non-anchor tasks yield exactly one instance (targets may be empty).
    Anchor tasks yield one instance per distinct explicit anchor value;
    IMPLICIT anchors produce no instance.
    """
    if task.given is None:
        targets = _dedupe(
            project(q, task.signature) for q in review.quads if _keep(q, task.signature)
        )
        return [TaskInstance(f"{review.id}:{task.name}", review, task, targets)]

    if task.given == "A":
        anchors = _dedupe(q.aspect for q in review.quads if q.aspect is not IMPLICIT)
        match = lambda q, a: q.aspect == a
    else:  # given category
        anchors = _dedupe(q.category for q in review.quads)
        match = lambda q, a: q.category == a

    instances = []
    for i, anchor in enumerate(anchors):
        targets = _dedupe(
            project(q, task.signature)
            for q in review.quads
            if match(q, anchor) and _keep(q, task.signature)
        )
        instances.append(
            TaskInstance(
                f"{review.id}:{task.name}:{i}", review, task, targets, given=anchor
            )
        )
    return instances


def derive_all(manifest: DatasetManifest, tasks) -> dict:
    """Derive instances for every review of the manifest, per task.

    Returns a task-name -> instance-list map, review order preserved.
    """
    out = {}
    for task in tasks:
        if isinstance(task, str):
            task = get_task(task)
        instances = []
        for review in manifest.reviews:
            instances.extend(derive(review, task))
        out[task.name] = instances
    return out


def kshot_sample(manifest: DatasetManifest, config: ShotConfig) -> DatasetManifest:
    """Sample K whole reviews without replacement, deterministically in
    (manifest, K, seed).  Original review order is preserved."""
    n = len(manifest.reviews)
    if config.k > n:
        raise KTooLarge(f"K={config.k} exceeds split size {n}")
    rng = random.Random(config.seed)
    indices = sorted(rng.sample(range(n), config.k))
    return DatasetManifest(
        name=manifest.name,
        split=manifest.split,
        taxonomy=manifest.taxonomy,
        reviews=[manifest.reviews[i] for i in indices],
    )


def _tuple_to_json(t):
    return [_term_to_json(slot) for slot in t]


def _tuple_from_json(values):
    return tuple(_term_from_json(v) for v in values)


def write_instances(instances, path) -> None:
    """Write derived-instance records (canonical format)."""
    with open(path, "w", encoding="utf-8") as fh:
        for inst in instances:
            rec = {
                "id": inst.id,
                "text": inst.review.text,
                "review_id": inst.review.id,
                "task": inst.task.name,
                "given": inst.given,
                "targets": [_tuple_to_json(t) for t in inst.targets],
            }
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def read_instances(path) -> list:
    """Read derived-instance records back; reviews carry no quads."""
    instances = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError:
                raise SchemaViolation(f"line {lineno}: not a valid record") from None
            task = get_task(_require(obj, "task", lineno))
            review = Review(
                id=obj.get("review_id", obj["id"]),
                text=_require(obj, "text", lineno),
                quads=(),
            )
            instances.append(
                TaskInstance(
                    id=_require(obj, "id", lineno),
                    review=review,
                    task=task,
                    targets=tuple(
                        _tuple_from_json(t) for t in _require(obj, "targets", lineno)
                    ),
                    given=obj.get("given"),
                )
            )
    return instances

"""Build multi-task training mixtures from per-task rendered datasets.

Strategies: RANDOM (shuffled union), UNIFORM_UNDER (downsample every task to
the smallest), UNIFORM_OVER (replicate every task up to the largest), and
BATCH_UNIFORM (fixed per-task quotas inside each batch).  All strategies are
deterministic under a seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .core import AbsaError, get_task


class EmptyTaskDataset(AbsaError):
    """A requested task with no examples."""


class BatchSizeIndivisible(AbsaError):
    """Batch size not divisible by the task count."""


class Strategy:
    RANDOM = "RANDOM"
    UNIFORM_UNDER = "UNIFORM_UNDER"
    UNIFORM_OVER = "UNIFORM_OVER"
    BATCH_UNIFORM = "BATCH_UNIFORM"

    ALL = (RANDOM, UNIFORM_UNDER, UNIFORM_OVER, BATCH_UNIFORM)


@dataclass(frozen=True)
class MixtureSpec:
    strategy: str
    tasks: tuple
    seed: int = 0
    batch_size: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))
        if not self.tasks:
            raise AbsaError("mixture needs at least one task")
        if self.strategy not in Strategy.ALL:
            raise AbsaError(f"unknown strategy: {self.strategy!r}")
        if self.strategy == Strategy.BATCH_UNIFORM:
            if not self.batch_size or self.batch_size % len(self.tasks) != 0:
                raise BatchSizeIndivisible(
                    f"batch size {self.batch_size} not divisible by "
                    f"{len(self.tasks)} tasks"
                )


def _check(datasets, spec):
    for name in spec.tasks:
        if name not in datasets:
            raise EmptyTaskDataset(f"no dataset for task {name}")
        if not datasets[name]:
            raise EmptyTaskDataset(f"task {name} has no examples")


def _oversample(examples, target, rng):
    # Every original at least once, remainder replicated at random.
    out = list(examples)
    out.extend(rng.choice(examples) for _ in range(target - len(examples)))
    return out


def mix(datasets: dict, spec: MixtureSpec) -> list:
    """Combine per-task example lists into one ordered training sequence."""
    _check(datasets, spec)
    rng = random.Random(spec.seed)
    sizes = {name: len(datasets[name]) for name in spec.tasks}

    if spec.strategy == Strategy.RANDOM:
        out = [ex for name in spec.tasks for ex in datasets[name]]
        rng.shuffle(out)
        return out

    if spec.strategy == Strategy.UNIFORM_UNDER:
        m = min(sizes.values())
        out = []
        for name in spec.tasks:
            picked = rng.sample(range(sizes[name]), m)
            out.extend(datasets[name][i] for i in sorted(picked))
        rng.shuffle(out)
        return out

    if spec.strategy == Strategy.UNIFORM_OVER:
        target = max(sizes.values())
        out = []
        for name in spec.tasks:
            out.extend(_oversample(datasets[name], target, rng))
        rng.shuffle(out)
        return out

    # BATCH_UNIFORM: per-batch quotas, cycling until the largest task is
    # exhausted; shorter tasks replicate to keep quotas full.
    quota = spec.batch_size // len(spec.tasks)
    largest = max(sizes.values())
    n_batches = -(-largest // quota)
    streams = {}
    for name in spec.tasks:
        stream = list(datasets[name])
        rng.shuffle(stream)
        stream = _oversample(stream, n_batches * quota, rng) if len(
            stream
        ) < n_batches * quota else stream[: n_batches * quota]
        streams[name] = stream
    out = []
    for b in range(n_batches):
        batch = []
        for name in spec.tasks:
            batch.extend(streams[name][b * quota : (b + 1) * quota])
        rng.shuffle(batch)
        out.extend(batch)
    return out


def task_subset(datasets: dict, element: str) -> dict:
    """Keep only the tasks that involve one sentiment element (A, C, O, or
    S), counting the given anchor as involvement."""
    if element not in "ACOS" or len(element) != 1:
        raise AbsaError(f"element must be one of A, C, O, S, got {element!r}")
    return {
        name: data
        for name, data in datasets.items()
        if element in get_task(name).involves
    }

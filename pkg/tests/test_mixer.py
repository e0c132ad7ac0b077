from collections import Counter

import pytest

from absakit.mixer import (
    BatchSizeIndivisible,
    EmptyTaskDataset,
    MixtureSpec,
    Strategy,
    mix,
    task_subset,
)


def _datasets():
    return {
        "ATE": [("ATE", i) for i in range(5)],
        "AOPE": [("AOPE", i) for i in range(3)],
        "ACOSQE": [("ACOSQE", i) for i in range(2)],
    }


TASKS = ("ATE", "AOPE", "ACOSQE")


def test_random_is_a_permutation_of_the_union():
    out = mix(_datasets(), MixtureSpec(Strategy.RANDOM, TASKS, seed=1))
    assert len(out) == 10
    union = [ex for examples in _datasets().values() for ex in examples]
    assert Counter(out) == Counter(union)


def test_uniform_under_counts():
    out = mix(_datasets(), MixtureSpec(Strategy.UNIFORM_UNDER, TASKS, seed=1))
    assert len(out) == 6
    counts = Counter(task for task, _ in out)
    assert counts == {"ATE": 2, "AOPE": 2, "ACOSQE": 2}


def test_uniform_under_draws_without_replacement():
    out = mix(_datasets(), MixtureSpec(Strategy.UNIFORM_UNDER, TASKS, seed=4))
    assert len(set(out)) == len(out)


def test_uniform_over_counts_and_coverage():
    out = mix(_datasets(), MixtureSpec(Strategy.UNIFORM_OVER, TASKS, seed=1))
    assert len(out) == 15
    counts = Counter(task for task, _ in out)
    assert counts == {"ATE": 5, "AOPE": 5, "ACOSQE": 5}
    for task, examples in _datasets().items():
        for ex in examples:
            assert ex in out  # every original appears at least once


def test_determinism():
    spec = MixtureSpec(Strategy.UNIFORM_OVER, TASKS, seed=42)
    assert mix(_datasets(), spec) == mix(_datasets(), spec)
    other = MixtureSpec(Strategy.UNIFORM_OVER, TASKS, seed=43)
    assert mix(_datasets(), spec) != mix(_datasets(), other)


def test_batch_uniform_quotas():
    spec = MixtureSpec(Strategy.BATCH_UNIFORM, TASKS, seed=2, batch_size=6)
    out = mix(_datasets(), spec)
    # Largest task has 5 examples at 2 per batch -> 3 batches of 6.
    assert len(out) == 18
    for b in range(3):
        batch = out[b * 6 : (b + 1) * 6]
        counts = Counter(task for task, _ in batch)
        assert counts == {"ATE": 2, "AOPE": 2, "ACOSQE": 2}
    counts = Counter(task for task, _ in out)
    assert counts["ATE"] == 6  # replication fills the last quota


def test_batch_size_must_divide():
    with pytest.raises(BatchSizeIndivisible):
        MixtureSpec(Strategy.BATCH_UNIFORM, TASKS, seed=0, batch_size=7)


def test_empty_task_dataset():
    datasets = _datasets()
    datasets["AOPE"] = []
    with pytest.raises(EmptyTaskDataset):
        mix(datasets, MixtureSpec(Strategy.RANDOM, TASKS, seed=0))
    with pytest.raises(EmptyTaskDataset):
        mix(_datasets(), MixtureSpec(Strategy.RANDOM, ("ATE", "CSPE"), seed=0))


ALL_TASK_DATA = {name: [name] for name in (
    "ATE", "ACD", "ABSC", "COSC", "AOOE", "ASPE", "AOPE", "CSPE",
    "AOSTE", "ACSTE", "ACOSQE",
)}


def test_task_subset_category():
    assert set(task_subset(ALL_TASK_DATA, "C")) == {
        "ACD", "COSC", "CSPE", "ACSTE", "ACOSQE"
    }


def test_task_subset_sentiment():
    assert set(task_subset(ALL_TASK_DATA, "S")) == {
        "ABSC", "COSC", "ASPE", "CSPE", "AOSTE", "ACSTE", "ACOSQE"
    }


def test_task_subset_aspect_includes_given_anchors():
    assert set(task_subset(ALL_TASK_DATA, "A")) == {
        "ATE", "ABSC", "AOOE", "ASPE", "AOPE", "AOSTE", "ACSTE", "ACOSQE"
    }


def test_task_subset_opinion():
    assert set(task_subset(ALL_TASK_DATA, "O")) == {"AOOE", "AOPE", "AOSTE", "ACOSQE"}


def test_task_subset_on_empty_input():
    assert task_subset({}, "A") == {}

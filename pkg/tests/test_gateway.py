import random
import sys

import pytest

from absakit.core import TASK_ORDER
from absakit.derive import derive_all
from absakit.evaluate import score_run
from absakit.gateway import (
    BackendUnavailable,
    OracleBackend,
    OracleConfig,
    ProtocolViolation,
    SubprocessBackend,
    corrupt_oracle,
    example_rng,
    gold_oracle,
    infer,
    make_backend,
    parse_request_line,
    parse_response_line,
    validate_transcript,
)
from absakit.parser import parse_batch
from absakit.render import EMPTY_MARKER, SSEP, RenderedExample, render_example


def _ex(id, target, task="AOPE", input="prompt"):
    return RenderedExample(id=id, task=task, input=input, target=target)


def test_gold_oracle_echoes_target():
    assert gold_oracle(_ex("1", "food quality is good")) == "food quality is good"


def test_gold_backend_end_to_end(restaurant_train):
    derived = derive_all(restaurant_train, TASK_ORDER)
    for name, instances in derived.items():
        examples = [render_example(i, restaurant_train.taxonomy) for i in instances]
        outputs = infer(examples, make_backend("gold"))
        assert outputs == [ex.target for ex in examples]


def test_corrupt_drop_all():
    cfg = OracleConfig(mode="CORRUPT", drop_prob=1.0, seed=1)
    ex = _ex("1", f"a is b {SSEP} c is d")
    assert corrupt_oracle(ex, cfg) == EMPTY_MARKER


def test_corrupt_is_deterministic_per_example():
    cfg = OracleConfig(mode="CORRUPT", drop_prob=0.5, mangle_prob=0.5, seed=7)
    ex = _ex("42", f"a is b {SSEP} c is d {SSEP} e is f")
    assert corrupt_oracle(ex, cfg) == corrupt_oracle(ex, cfg)


def test_corrupt_replay_oracle():
    # Replay the seeded per-summary decisions to predict survivors exactly.
    cfg = OracleConfig(mode="CORRUPT", drop_prob=0.3, seed=11)
    summaries = ["a is b", "c is d", "e is f", "g is h"]
    ex = _ex("x9", f" {SSEP} ".join(summaries))
    rng = example_rng(cfg.seed, ex.id)
    expected = []
    for s in summaries:
        if rng.random() < cfg.drop_prob:
            continue
        rng.random()  # mangle decision draw, unused at mangle_prob=0
        expected.append(s)
    got = corrupt_oracle(ex, cfg)
    assert got == (f" {SSEP} ".join(expected) if expected else EMPTY_MARKER)


def test_corrupt_sentiment_flip_scores_zero():
    cfg = OracleConfig(mode="CORRUPT", drop_prob=0.0, mangle_prob=1.0, seed=3)
    ex = _ex("1", "food quality is good because sushi is delicious", task="ACOSQE")
    out = corrupt_oracle(ex, cfg)
    assert out == "food quality is bad because sushi is delicious"
    from absakit.core import Taxonomy
    from absakit.parser import parse

    tax = Taxonomy(["FOOD#QUALITY"])
    parsed = parse("ACOSQE", out, tax)
    assert len(parsed.tuples) == 1
    from absakit.evaluate import score_task

    gold = parse("ACOSQE", ex.target, tax).tuples
    assert score_task([parsed.tuples], [gold]).tp == 0


def test_corrupt_mangles_term_when_no_sentiment_word():
    cfg = OracleConfig(mode="CORRUPT", drop_prob=0.0, mangle_prob=1.0, seed=3)
    ex = _ex("1", "sushi is delicious", task="AOPE")
    assert corrupt_oracle(ex, cfg) == "sushi is deliciousish"


def test_corrupt_on_empty_target_stays_empty():
    cfg = OracleConfig(mode="CORRUPT", drop_prob=0.0, mangle_prob=1.0, seed=3)
    assert corrupt_oracle(_ex("1", EMPTY_MARKER), cfg) == EMPTY_MARKER


def test_oracle_config_validates_probabilities():
    from absakit.core import AbsaError

    with pytest.raises(AbsaError):
        OracleConfig(mode="CORRUPT", drop_prob=1.5)


def test_corrupt_recall_matches_survival_fraction(restaurant_train):
    # End-to-end: recall equals survivors/gold exactly, precision 1.
    cfg = OracleConfig(mode="CORRUPT", drop_prob=0.4, mangle_prob=0.0, seed=5)
    derived = derive_all(restaurant_train, ["ACOSQE", "AOPE"])
    preds, golds = {}, {}
    survived = total = 0
    for name, instances in derived.items():
        examples = [render_example(i, restaurant_train.taxonomy) for i in instances]
        outputs = infer(examples, OracleBackend(cfg))
        outcomes = parse_batch(name, outputs, restaurant_train.taxonomy)
        preds[name] = [o.tuples for o in outcomes]
        golds[name] = [i.targets for i in instances]
        for ex, inst in zip(examples, instances):
            total += len(inst.targets)
            if not inst.targets:
                continue
            rng = example_rng(cfg.seed, ex.id)
            for _ in inst.targets:
                if rng.random() >= cfg.drop_prob:
                    survived += 1
                    rng.random()
    report = score_run(preds, golds)
    for name, m in report.per_task.items():
        if m.n_pred:
            assert m.precision == 1.0
    micro_recall = sum(m.tp for m in report.per_task.values()) / total
    assert micro_recall == survived / total


def test_wire_format_parsing():
    req = parse_request_line('{"id": "1", "task": "ATE", "input": "x"}')
    assert req.id == "1" and req.input == "x"
    resp = parse_response_line('{"id": "1", "output": "y"}')
    assert resp.output == "y"
    with pytest.raises(ProtocolViolation):
        parse_request_line("not json")
    with pytest.raises(ProtocolViolation):
        parse_response_line('{"id": "1"}')


def test_validate_transcript():
    reqs = ['{"id": "1", "task": "ATE", "input": "a"}',
            '{"id": "2", "task": "ATE", "input": "b"}']
    resps = ['{"id": "2", "output": "y"}', '{"id": "1", "output": "x"}']
    validate_transcript(reqs, resps)  # out-of-order ids are fine
    with pytest.raises(ProtocolViolation):
        validate_transcript(reqs, resps[:1])


ECHO_BACKEND = (
    "import sys, json\n"
    "for line in sys.stdin:\n"
    "    r = json.loads(line)\n"
    "    print(json.dumps({'id': r['id'], 'output': 'echo:' + r['input']}))\n"
    "    sys.stdout.flush()\n"
)

REVERSED_BACKEND = (
    "import sys, json\n"
    "lines = [json.loads(l) for l in sys.stdin]\n"
    "for r in reversed(lines):\n"
    "    print(json.dumps({'id': r['id'], 'output': 'echo:' + r['input']}))\n"
)


def test_subprocess_backend_round_trip():
    backend = SubprocessBackend([sys.executable, "-c", ECHO_BACKEND], timeout=20)
    examples = [_ex(str(i), "t", input=f"in{i}") for i in range(5)]
    outputs = infer(examples, backend)
    assert outputs == [f"echo:in{i}" for i in range(5)]


def test_subprocess_backend_reassociates_out_of_order_responses():
    backend = SubprocessBackend([sys.executable, "-c", REVERSED_BACKEND], timeout=20)
    examples = [_ex(str(i), "t", input=f"in{i}") for i in range(5)]
    outputs = infer(examples, backend)
    assert outputs == [f"echo:in{i}" for i in range(5)]


def test_subprocess_backend_timeout_yields_empty_outputs():
    silent = "import sys\nfor line in sys.stdin: pass\n"
    backend = SubprocessBackend([sys.executable, "-c", silent], timeout=1.0)
    examples = [_ex("1", "t"), _ex("2", "t")]
    assert infer(examples, backend) == ["", ""]


def test_subprocess_backend_unavailable():
    backend = SubprocessBackend(["/nonexistent/binary"], timeout=1.0)
    with pytest.raises(BackendUnavailable):
        backend.run([], [])


def test_make_backend_specs():
    from absakit.core import AbsaError
    from absakit.gateway import HttpBackend

    assert isinstance(make_backend("gold"), OracleBackend)
    assert isinstance(make_backend("cmd:echo hi"), SubprocessBackend)
    assert isinstance(make_backend("http://localhost:9/x"), HttpBackend)
    with pytest.raises(AbsaError):
        make_backend("quantum")


def test_http_backend_unreachable():
    backend = make_backend("http://127.0.0.1:9/infer", timeout=1.0)
    with pytest.raises(BackendUnavailable):
        backend.run([type("R", (), {"id": "1", "to_json": lambda self: "{}"})()])


def test_response_order_shuffle_does_not_change_scores(restaurant_train):
    # Protocol invariant: scores depend on ids, not arrival order.
    derived = derive_all(restaurant_train, ["AOPE"])["AOPE"]
    examples = [render_example(i, restaurant_train.taxonomy) for i in derived]
    outputs = infer(examples, make_backend("gold"))
    pairs = list(zip(examples, outputs))
    random.Random(0).shuffle(pairs)
    by_id = {ex.id: out for ex, out in pairs}
    reordered = [by_id[ex.id] for ex in examples]
    assert reordered == outputs

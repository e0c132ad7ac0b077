"""Drive any generation model through a uniform line-delimited inference
protocol, with built-in oracle backends (gold, corrupting) so the full
pipeline is testable without an ML runtime.

Wire format: one JSON record per line, UTF-8.  Requests carry
``{"id", "task", "input"}``; responses carry ``{"id", "output"}``.
Responses re-associate to requests strictly by id, so backends may answer
out of order.
"""

from __future__ import annotations

import json
import queue
import random
import shlex
import subprocess
import threading
import time
from dataclasses import dataclass

from .core import AbsaError
from .render import EMPTY_MARKER, SSEP


class BackendUnavailable(AbsaError):
    """The backend process or endpoint cannot be reached."""


class ProtocolViolation(AbsaError):
    """A malformed request/response line."""


@dataclass(frozen=True)
class InferenceRequest:
    id: str
    task: str
    input: str

    def to_json(self) -> str:
        return json.dumps(
            {"id": self.id, "task": self.task, "input": self.input},
            ensure_ascii=False,
        )


@dataclass(frozen=True)
class InferenceResponse:
    id: str
    output: str

    def to_json(self) -> str:
        return json.dumps({"id": self.id, "output": self.output}, ensure_ascii=False)


def parse_request_line(line: str) -> InferenceRequest:
    try:
        obj = json.loads(line)
        return InferenceRequest(id=str(obj["id"]), task=obj.get("task", ""), input=obj["input"])
    except (json.JSONDecodeError, KeyError, TypeError):
        raise ProtocolViolation(f"malformed request line: {line!r}") from None


def parse_response_line(line: str) -> InferenceResponse:
    try:
        obj = json.loads(line)
        return InferenceResponse(id=str(obj["id"]), output=str(obj["output"]))
    except (json.JSONDecodeError, KeyError, TypeError):
        raise ProtocolViolation(f"malformed response line: {line!r}") from None


def validate_transcript(request_lines, response_lines) -> None:
    """Check a recorded request/response transcript against the wire
    format: every line parses, and response ids biject onto request ids."""
    requests = [parse_request_line(l) for l in request_lines if l.strip()]
    responses = [parse_response_line(l) for l in response_lines if l.strip()]
    req_ids = [r.id for r in requests]
    resp_ids = [r.id for r in responses]
    if sorted(req_ids) != sorted(resp_ids):
        raise ProtocolViolation(
            f"response ids {sorted(resp_ids)} do not match request ids {sorted(req_ids)}"
        )
    if len(set(req_ids)) != len(req_ids):
        raise ProtocolViolation("duplicate request ids")


@dataclass(frozen=True)
class OracleConfig:
    """Corrupting-oracle knobs; GOLD mode ignores the probabilities."""

    mode: str = "GOLD"
    drop_prob: float = 0.0
    mangle_prob: float = 0.0
    seed: int = 0

    def __post_init__(self):
        for p in (self.drop_prob, self.mangle_prob):
            if not 0.0 <= p <= 1.0:
                raise AbsaError(f"probability out of range: {p}")


def example_rng(seed: int, example_id: str) -> random.Random:
    """Per-example RNG keyed by (seed, id): replayable regardless of the
    order examples are processed in."""
    return random.Random(f"{seed}:{example_id}")


def gold_oracle(example) -> str:
    """Echo the example's target verbatim."""
    return example.target


_WRONG_WORD = {
    "good": "bad",
    "ok": "good",
    "bad": "ok",
}


def corrupt_oracle(example, cfg: OracleConfig) -> str:
    """Drop each target summary with drop_prob, then mangle survivors with
    mangle_prob (flip a sentiment word, else replace the last term).
    Deterministic under (cfg.seed, example.id)."""
    rng = example_rng(cfg.seed, example.id)
    if example.target.strip() == EMPTY_MARKER:
        return EMPTY_MARKER
    summaries = example.target.split(f" {SSEP} ")
    out = []
    for summary in summaries:
        if rng.random() < cfg.drop_prob:
            continue
        if rng.random() < cfg.mangle_prob:
            words = summary.split(" ")
            flipped = False
            for i, w in enumerate(words):
                if w in _WRONG_WORD:
                    words[i] = _WRONG_WORD[w]
                    flipped = True
                    break
            if not flipped:
                words[-1] = words[-1] + "ish"
            summary = " ".join(words)
        out.append(summary)
    if not out:
        return EMPTY_MARKER
    return f" {SSEP} ".join(out)


class OracleBackend:
    """In-process backend serving the gold or corrupting oracle."""

    def __init__(self, config: OracleConfig = None, targets: dict = None):
        self.config = config or OracleConfig()
        # id -> target, for when requests don't carry targets themselves.
        self.targets = targets or {}

    def run(self, requests, examples):
        responses = []
        for req, ex in zip(requests, examples):
            if self.config.mode == "GOLD":
                out = gold_oracle(ex)
            else:
                out = corrupt_oracle(ex, self.config)
            responses.append(InferenceResponse(id=req.id, output=out))
        return responses


class SubprocessBackend:
    """Line-delimited protocol over a child process's standard streams."""

    def __init__(self, argv, timeout: float = 60.0):
        self.argv = list(argv) if not isinstance(argv, str) else shlex.split(argv)
        self.timeout = timeout

    def run(self, requests, examples=None):
        try:
            proc = subprocess.Popen(
                self.argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                encoding="utf-8",
            )
        except OSError as e:
            raise BackendUnavailable(f"cannot start {self.argv}: {e}") from None

        responses = queue.Queue()

        def pump():
            for line in proc.stdout:
                line = line.strip()
                if not line:
                    continue
                try:
                    responses.put(parse_response_line(line))
                except ProtocolViolation:
                    continue  # recorded as a missing id -> empty output

        reader = threading.Thread(target=pump, daemon=True)
        reader.start()
        try:
            for req in requests:
                proc.stdin.write(req.to_json() + "\n")
            proc.stdin.flush()
            proc.stdin.close()
        except BrokenPipeError:
            raise BackendUnavailable(f"backend {self.argv} closed its input") from None

        by_id = {}
        deadline = time.monotonic() + self.timeout
        while len(by_id) < len(requests):
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                break
            try:
                resp = responses.get(timeout=min(remaining, 0.2))
            except queue.Empty:
                if proc.poll() is not None and responses.empty():
                    # Drain whatever the reader still has, then stop.
                    reader.join(timeout=1.0)
                    while not responses.empty():
                        resp = responses.get_nowait()
                        by_id[resp.id] = resp.output
                    break
                continue
            by_id[resp.id] = resp.output
        proc.kill()
        proc.wait()
        # Timeouts / missing ids yield empty outputs, not an abort.
        return [
            InferenceResponse(id=req.id, output=by_id.get(req.id, ""))
            for req in requests
        ]


class HttpBackend:
    """POST one request record per example, expect one record back."""

    def __init__(self, url, timeout: float = 60.0):
        self.url = url
        self.timeout = timeout

    def run(self, requests_list, examples=None):
        import requests as _requests

        out = []
        for req in requests_list:
            try:
                r = _requests.post(
                    self.url,
                    data=req.to_json().encode("utf-8"),
                    headers={"Content-Type": "application/json"},
                    timeout=self.timeout,
                )
                r.raise_for_status()
                resp = parse_response_line(r.text.strip())
                out.append(InferenceResponse(id=req.id, output=resp.output if resp.id == req.id else ""))
            except _requests.exceptions.ConnectionError as e:
                raise BackendUnavailable(f"cannot reach {self.url}: {e}") from None
            except (_requests.exceptions.RequestException, ProtocolViolation):
                out.append(InferenceResponse(id=req.id, output=""))
        return out


def make_backend(spec: str, oracle_config: OracleConfig = None, timeout: float = 60.0):
    """Build a backend from a spec string: ``gold``, ``corrupt``,
    ``cmd:<argv>``, or ``http:<url>``."""
    if spec == "gold":
        return OracleBackend(OracleConfig(mode="GOLD"))
    if spec == "corrupt":
        return OracleBackend(oracle_config or OracleConfig(mode="CORRUPT"))
    if spec.startswith("cmd:"):
        return SubprocessBackend(spec[4:], timeout=timeout)
    if spec.startswith("http:"):
        url = spec[5:] if spec[5:].startswith("http") else spec
        return HttpBackend(url, timeout=timeout)
    raise AbsaError(f"unknown backend spec: {spec!r}")


def infer(examples, backend) -> list:
    """Run a backend over rendered examples; returns output strings aligned
    to the input order."""
    requests = [
        InferenceRequest(id=ex.id, task=ex.task, input=ex.input) for ex in examples
    ]
    responses = backend.run(requests, examples)
    by_id = {r.id: r.output for r in responses}
    return [by_id.get(req.id, "") for req in requests]

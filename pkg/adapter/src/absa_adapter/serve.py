"""Long-running request loop over standard streams.

Reads one JSON request record per line (``{"id", "task", "input"}``), emits
one response record per request (``{"id", "output"}``), flushing after
every line.  A malformed request line produces an error record naming the
line number and processing continues; a per-request generation error yields
an empty output field.
"""

from __future__ import annotations

import json
import sys

from .config import AdapterConfig
from .model import generate, load_model


def handle_line(line: str, lineno: int, tokenizer, model, config: AdapterConfig) -> str:
    try:
        record = json.loads(line)
        request_id = record["id"]
        text = record["input"]
    except (json.JSONDecodeError, KeyError, TypeError):
        return json.dumps({"error": "malformed request", "line": lineno})
    try:
        output = generate(tokenizer, model, config, text)
    except Exception:
        output = ""
    return json.dumps({"id": request_id, "output": output}, ensure_ascii=False)


def serve_stdio(config: AdapterConfig, stdin=None, stdout=None) -> None:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    try:
        tokenizer, model = load_model(config)
    except Exception as e:
        print(f"failed to load model {config.model!r}: {e}", file=sys.stderr)
        sys.exit(1)
    for lineno, line in enumerate(stdin, start=1):
        line = line.strip()
        if not line:
            continue
        stdout.write(handle_line(line, lineno, tokenizer, model, config) + "\n")
        stdout.flush()

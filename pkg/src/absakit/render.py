"""Serialize task instances into instruction-wrapped input strings and
target summary strings.

The input is the concatenation of Task Name, Input, Sentiment Options (for
sentiment tasks), Category Options (for category tasks), and Template
sections, joined by newlines.  Targets instantiate the task's template per
tuple and join multiple summaries with " [SSEP] ".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .core import (
    IMPLICIT,
    AbsaError,
    SENTIMENT_OPTIONS,
    Taxonomy,
    category_surface,
    get_task,
    polarity_to_word,
)
from .data_io import SchemaViolation, _require
from .derive import TaskInstance

SSEP = "[SSEP]"
EMPTY_MARKER = "none"
IMPLICIT_ASPECT_WORD = "it"
IMPLICIT_OPINION_WORD = "unstated"

# Only ACOSQE's template is fixed by design; the rest follow its style and
# may be overridden via a template config file.
DEFAULT_TEMPLATES = {
    "ATE": "the aspect is <aspect>",
    "ACD": "the category is <category>",
    "ABSC": "<extra_id_0> <sentiment>",
    "COSC": "<extra_id_0> <sentiment>",
    "AOOE": "the opinion is <opinion>",
    "ASPE": "<aspect> is <sentiment>",
    "AOPE": "<aspect> is <opinion>",
    "CSPE": "<category> is <sentiment>",
    "AOSTE": "it is <sentiment> because <aspect> is <opinion>",
    "ACSTE": "<category> is <sentiment> because of <aspect>",
    "ACOSQE": "<category> is <sentiment> because <aspect> is <opinion>",
}

PLACEHOLDERS = {
    "<aspect>": "A",
    "<category>": "C",
    "<opinion>": "O",
    "<sentiment>": "S",
}


class MissingAnchor(AbsaError):
    """An anchor task instance without its given element."""


class BadTemplate(AbsaError):
    """A template whose placeholders do not match the task signature."""


def task_name_token(task_name: str) -> str:
    return f"<{task_name}>"


def load_templates(path) -> dict:
    """Load template overrides from a ``TASK=pattern`` key-value file.

    Missing tasks fall back to the defaults; unknown task names raise.
    """
    templates = dict(DEFAULT_TEMPLATES)
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise SchemaViolation(f"line {lineno}: expected TASK=pattern")
            name, pattern = line.split("=", 1)
            name = name.strip().upper()
            get_task(name)
            templates[name] = pattern.strip()
    return templates


def validate_template(task_name: str, pattern: str) -> None:
    """Check that a pattern's placeholders are exactly the task signature
    and that consecutive placeholders are separated by literal text."""
    task = get_task(task_name)
    found = {e for ph, e in PLACEHOLDERS.items() if ph in pattern}
    if found != set(task.signature):
        raise BadTemplate(
            f"{task_name}: placeholders {sorted(found)} do not match "
            f"signature {sorted(task.signature)}"
        )
    probe = pattern
    for ph in PLACEHOLDERS:
        probe = probe.replace(ph, "\x00")
    if "\x00\x00" in probe:
        raise BadTemplate(f"{task_name}: adjacent placeholders are not parseable")


@dataclass(frozen=True)
class RenderedExample:
    """A fully serialized example: prompt text plus target summary."""

    id: str
    task: str
    input: str
    target: str
    given: Optional[str] = None


def render_input(
    instance: TaskInstance, taxonomy: Taxonomy, templates=None
) -> str:
    """Build the instruction-wrapped input string for an instance."""
    templates = templates or DEFAULT_TEMPLATES
    task = instance.task
    text = instance.review.text
    if task.given is not None:
        if instance.given is None:
            raise MissingAnchor(f"{task.name} instance {instance.id} has no anchor")
        anchor = (
            category_surface(instance.given) if task.given == "C" else instance.given
        )
        if task.name in ("ABSC", "COSC"):
            text = f"{text} The {anchor} is <extra_id_0>"
        elif task.name == "AOOE":
            text = f"{text} What about the {anchor}?"
    sections = [
        f"Task Name: {task_name_token(task.name)}",
        f"Input: {text}",
    ]
    if task.uses_sentiment_options:
        sections.append("Sentiment Options: " + ", ".join(SENTIMENT_OPTIONS))
    if task.uses_category_options:
        sections.append("Category Options: " + ", ".join(taxonomy.surfaces()))
    sections.append(f"Template: {templates[task.name]}")
    return "\n".join(sections)


def render_tuple(task_name: str, values: tuple, templates=None) -> str:
    """Instantiate the task template with one target tuple."""
    templates = templates or DEFAULT_TEMPLATES
    task = get_task(task_name)
    out = templates[task.name]
    for slot, value in zip(task.signature, values):
        if slot == "A":
            text = IMPLICIT_ASPECT_WORD if value is IMPLICIT else value
            out = out.replace("<aspect>", text)
        elif slot == "C":
            out = out.replace("<category>", category_surface(value))
        elif slot == "O":
            text = IMPLICIT_OPINION_WORD if value is IMPLICIT else value
            out = out.replace("<opinion>", text)
        elif slot == "S":
            out = out.replace("<sentiment>", polarity_to_word(value))
    return out


def render_target(instance: TaskInstance, templates=None) -> str:
    """Render the target summary string; empty target sets become the
    reserved word "none"."""
    if not instance.targets:
        return EMPTY_MARKER
    summaries = [
        render_tuple(instance.task.name, t, templates) for t in instance.targets
    ]
    return f" {SSEP} ".join(summaries)


def render_example(
    instance: TaskInstance, taxonomy: Taxonomy, templates=None
) -> RenderedExample:
    return RenderedExample(
        id=instance.id,
        task=instance.task.name,
        input=render_input(instance, taxonomy, templates),
        target=render_target(instance, templates),
        given=instance.given,
    )


def write_rendered(examples, path) -> None:
    """Write rendered records (canonical format)."""
    with open(path, "w", encoding="utf-8") as fh:
        for ex in examples:
            rec = {
                "id": ex.id,
                "task": ex.task,
                "given": ex.given,
                "input": ex.input,
                "target": ex.target,
            }
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def read_rendered(path) -> list:
    examples = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError:
                raise SchemaViolation(f"line {lineno}: not a valid record") from None
            examples.append(
                RenderedExample(
                    id=_require(obj, "id", lineno),
                    task=_require(obj, "task", lineno),
                    input=_require(obj, "input", lineno),
                    target=_require(obj, "target", lineno),
                    given=obj.get("given"),
                )
            )
    return examples

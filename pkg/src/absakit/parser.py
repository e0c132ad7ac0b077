"""Invert target rendering: recover predicted tuple sets from raw generated
text given the task's template.

Parsing never raises on malformed text: each summary that fails literal
anchoring or vocabulary lookup is recorded as a failure and contributes no
tuple, so it simply loses credit at evaluation time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .core import (
    IMPLICIT,
    Taxonomy,
    TaskKind,
    UnknownCategory,
    UnknownLabelWord,
    get_task,
    word_to_polarity,
)
from .render import (
    DEFAULT_TEMPLATES,
    EMPTY_MARKER,
    IMPLICIT_ASPECT_WORD,
    IMPLICIT_OPINION_WORD,
    PLACEHOLDERS,
)

_SSEP_SPLIT = re.compile(r"\s*\[\s*SSEP\s*\]\s*", re.IGNORECASE)
_PLACEHOLDER_RE = re.compile("|".join(re.escape(p) for p in PLACEHOLDERS))


@dataclass
class ParseOutcome:
    """De-duplicated tuples plus a record of unparseable fragments."""

    tuples: tuple = ()
    failures: list = field(default_factory=list)


def _compile_template(pattern: str):
    """Turn a template into a regex with one capture per placeholder.

    Literals are matched case-insensitively; captures are non-greedy except
    the last, giving the leftmost-shortest reading for early ambiguous
    captures.
    """
    parts = []
    slots = []
    pos = 0
    matches = list(_PLACEHOLDER_RE.finditer(pattern))
    for i, m in enumerate(matches):
        parts.append(re.escape(pattern[pos : m.start()]))
        greedy = "(.+)" if i == len(matches) - 1 else "(.+?)"
        parts.append(greedy)
        slots.append(PLACEHOLDERS[m.group(0)])
        pos = m.end()
    parts.append(re.escape(pattern[pos:]))
    return re.compile("".join(parts), re.IGNORECASE | re.DOTALL), slots


def _decode_slot(slot: str, text: str, taxonomy):
    text = text.strip()
    if slot == "S":
        return word_to_polarity(text)
    if slot == "C":
        if taxonomy is None:
            raise UnknownCategory("no taxonomy supplied for category lookup")
        return taxonomy.surface_to_canonical(text)
    if slot == "A" and text.lower() == IMPLICIT_ASPECT_WORD:
        return IMPLICIT
    if slot == "O" and text.lower() == IMPLICIT_OPINION_WORD:
        return IMPLICIT
    return text


def parse(
    task,
    text: str,
    taxonomy: Taxonomy = None,
    template: str = None,
) -> ParseOutcome:
    """Parse generated text into the task's tuple set.

    ``template`` defaults to the task's rendering template and must be the
    one used for rendering (or a configured override).
    """
    if isinstance(task, str):
        task = get_task(task)
    template = template or DEFAULT_TEMPLATES[task.name]
    regex, slots = _compile_template(template)

    if text is None:
        text = ""
    stripped = text.strip()
    if not stripped or stripped.lower() == EMPTY_MARKER:
        return ParseOutcome()

    tuples = {}
    failures = []
    for summary in _SSEP_SPLIT.split(stripped):
        if not summary:
            continue
        m = regex.fullmatch(summary)
        if m is None:
            failures.append((summary, "template mismatch"))
            continue
        values = {}
        try:
            for slot, captured in zip(slots, m.groups()):
                values[slot] = _decode_slot(slot, captured, taxonomy)
        except UnknownLabelWord as e:
            failures.append((summary, str(e)))
            continue
        except UnknownCategory as e:
            failures.append((summary, str(e)))
            continue
        tuples.setdefault(tuple(values[s] for s in task.signature), None)
    return ParseOutcome(tuples=tuple(tuples), failures=failures)


def parse_batch(task, outputs, taxonomy: Taxonomy = None, template: str = None):
    """Element-wise parse, order preserved."""
    return [parse(task, out, taxonomy, template) for out in outputs]

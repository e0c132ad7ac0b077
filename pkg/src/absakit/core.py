"""Core domain types: polarities, terms, categories, quads, reviews, and the
task registry shared by every other module.

All types here are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


class AbsaError(Exception):
    """Base class for toolkit errors."""


class UnknownLabelWord(AbsaError):
    """A sentiment word outside the closed {good, ok, bad} vocabulary."""


class UnknownCategory(AbsaError):
    """A category absent from the loaded taxonomy."""


class UnknownTask(AbsaError):
    """A task name absent from the 11-task registry."""


class _Implicit:
    """Distinguished sentinel for aspect/opinion terms with no surface form.

    A singleton so identity checks (`term is IMPLICIT`) work everywhere.
    Not an empty string: empty strings are reserved for parse-failure
    signaling.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "IMPLICIT"

    def __reduce__(self):
        return (_Implicit, ())


IMPLICIT = _Implicit()

#: An aspect/opinion term: a verbatim substring of the review, or IMPLICIT.
Term = Union[str, _Implicit]


class Polarity:
    POSITIVE = "POSITIVE"
    NEUTRAL = "NEUTRAL"
    NEGATIVE = "NEGATIVE"

    ALL = (POSITIVE, NEUTRAL, NEGATIVE)


# Bijection between polarities and the sentiment label words used in
# rendered summaries.
_POLARITY_TO_WORD = {
    Polarity.POSITIVE: "good",
    Polarity.NEUTRAL: "ok",
    Polarity.NEGATIVE: "bad",
}
_WORD_TO_POLARITY = {w: p for p, w in _POLARITY_TO_WORD.items()}

SENTIMENT_OPTIONS = ("good", "ok", "bad")


def polarity_to_word(polarity: str) -> str:
    """Map a polarity to its label word (POSITIVE -> "good", ...)."""
    return _POLARITY_TO_WORD[polarity]


def word_to_polarity(word: str) -> str:
    """Inverse of :func:`polarity_to_word`, tolerant of case and whitespace.

    Raises UnknownLabelWord for anything outside {good, ok, bad}.
    """
    key = word.strip().lower()
    try:
        return _WORD_TO_POLARITY[key]
    except KeyError:
        raise UnknownLabelWord(f"not a sentiment label word: {word!r}") from None


def category_surface(canonical: str) -> str:
    """Render a canonical category id as its natural-language surface form.

    Lowercase, with ``#`` and ``_`` replaced by single spaces:
    ``FOOD#QUALITY`` -> ``food quality``.
    """
    return canonical.lower().replace("#", " ").replace("_", " ")


class Taxonomy:
    """An ordered, closed set of canonical category labels.

    Checks at construction that the canonical <-> surface mapping is
    bijective, and resolves surface forms back to canonical ids.
    """

    def __init__(self, categories):
        self.categories = tuple(categories)
        self._surface_to_canonical = {}
        for c in self.categories:
            s = category_surface(c)
            if s in self._surface_to_canonical:
                raise AbsaError(
                    f"category surface collision: {c!r} and "
                    f"{self._surface_to_canonical[s]!r} both map to {s!r}"
                )
            self._surface_to_canonical[s] = c

    def __len__(self):
        return len(self.categories)

    def __iter__(self):
        return iter(self.categories)

    def __contains__(self, canonical):
        return canonical in self._surface_to_canonical.values()

    def __eq__(self, other):
        return isinstance(other, Taxonomy) and self.categories == other.categories

    def surfaces(self):
        return [category_surface(c) for c in self.categories]

    def surface_to_canonical(self, surface: str) -> str:
        """Recover the canonical id for a surface form.

        Raises UnknownCategory when the surface is not in the taxonomy.
        """
        key = surface.strip().lower()
        try:
            return self._surface_to_canonical[key]
        except KeyError:
            raise UnknownCategory(f"unknown category surface: {surface!r}") from None


@dataclass(frozen=True)
class AcosQuad:
    """One (aspect, category, opinion, polarity) annotation.

    All four slots are always present; IMPLICIT is a value, not absence.
    """

    aspect: Term
    category: str
    opinion: Term
    polarity: str


@dataclass(frozen=True)
class Review:
    """A source sentence with its quad set; the unit of K-shot sampling."""

    id: str
    text: str
    quads: tuple

    def __post_init__(self):
        object.__setattr__(self, "quads", tuple(self.quads))


@dataclass(frozen=True)
class TaskKind:
    """One of the 11 ABSA tasks.

    ``signature`` is the ordered subset of elements (drawn from "ACOS") the
    task outputs; ``given`` is the optional anchor element provided in the
    input ("A" for ABSC/AOOE, "C" for COSC).
    """

    name: str
    signature: str
    given: Optional[str] = None

    @property
    def uses_sentiment_options(self) -> bool:
        return "S" in self.signature

    @property
    def uses_category_options(self) -> bool:
        return "C" in self.signature

    @property
    def involves(self) -> frozenset:
        """Elements this task touches: output signature plus the given anchor."""
        elems = set(self.signature)
        if self.given:
            elems.add(self.given)
        return frozenset(elems)


TASKS = {
    t.name: t
    for t in (
        TaskKind("ATE", "A"),
        TaskKind("ACD", "C"),
        TaskKind("ABSC", "S", given="A"),
        TaskKind("COSC", "S", given="C"),
        TaskKind("AOOE", "O", given="A"),
        TaskKind("ASPE", "AS"),
        TaskKind("AOPE", "AO"),
        TaskKind("CSPE", "CS"),
        TaskKind("AOSTE", "AOS"),
        TaskKind("ACSTE", "ACS"),
        TaskKind("ACOSQE", "ACOS"),
    )
}

TASK_ORDER = tuple(TASKS)


def get_task(name: str) -> TaskKind:
    try:
        return TASKS[name.upper()]
    except KeyError:
        raise UnknownTask(f"unknown task: {name!r}") from None


def project(quad: AcosQuad, signature: str) -> tuple:
    """Project a quad onto a task signature, in A, C, O, S order."""
    slots = {
        "A": quad.aspect,
        "C": quad.category,
        "O": quad.opinion,
        "S": quad.polarity,
    }
    return tuple(slots[e] for e in signature)

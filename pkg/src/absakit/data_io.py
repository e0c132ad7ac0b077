"""Load ACOS source files and read/write the toolkit's canonical
line-delimited record format.

Canonical files are UTF-8, one JSON record per line.  A manifest file starts
with a header record carrying name/split/taxonomy, followed by one review
record per line.  Derived-instance records add ``task``/``given``/``targets``
fields; rendered records add ``input``/``target``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .core import (
    IMPLICIT,
    AbsaError,
    AcosQuad,
    Polarity,
    Review,
    Taxonomy,
    UnknownCategory,
)

IMPLICIT_MARKER = "IMPLICIT"

# Index convention of the public ACOS releases; overridable per load.
DEFAULT_SENTIMENT_INDEX = {
    0: Polarity.NEGATIVE,
    1: Polarity.NEUTRAL,
    2: Polarity.POSITIVE,
}


class MalformedLine(AbsaError):
    """An ACOS source line with the wrong field count."""


class SpanOutOfRange(AbsaError):
    """A token span outside the tokenized sentence."""


class UnknownSentimentIndex(AbsaError):
    """A sentiment index outside the configured mapping."""


class SchemaViolation(AbsaError):
    """A canonical record missing or mistyping a required field."""


@dataclass(frozen=True)
class DatasetManifest:
    """A named split of reviews together with its category taxonomy."""

    name: str
    split: str
    taxonomy: Taxonomy
    reviews: tuple

    def __post_init__(self):
        object.__setattr__(self, "reviews", tuple(self.reviews))

    @property
    def quad_count(self) -> int:
        return sum(len(r.quads) for r in self.reviews)


def _parse_span(token: str, lineno: int):
    try:
        i, j = token.split(",")
        return int(i), int(j)
    except ValueError:
        raise MalformedLine(f"line {lineno}: bad span {token!r}") from None


def _resolve_span(tokens, start, end, lineno, inclusive_end=False):
    if (start, end) == (-1, -1):
        return IMPLICIT
    if inclusive_end:
        end = end + 1
    if not (0 <= start < end <= len(tokens)):
        raise SpanOutOfRange(
            f"line {lineno}: span {start},{end} outside {len(tokens)} tokens"
        )
    return " ".join(tokens[start:end])


def load_acos_tsv(
    path,
    taxonomy_mode="infer",
    name: str = "",
    split: str = "train",
    sentiment_index=None,
    inclusive_end: bool = False,
) -> DatasetManifest:
    """Load a public-format ACOS TSV file.

    One review per line: sentence, then one TAB-separated group per quad.
    Each group is ``i,j CATEGORY s k,l`` with token spans over the
    whitespace-split sentence (``j`` exclusive) and ``-1,-1`` meaning
    IMPLICIT.  The category column may be a canonical string, or an integer
    index when ``taxonomy_mode`` is a fixed category list.

    ``taxonomy_mode`` is either ``"infer"`` (collect categories from the
    data) or a list of canonical categories to validate against.
    """
    sentiment_index = sentiment_index or DEFAULT_SENTIMENT_INDEX
    fixed = None if taxonomy_mode == "infer" else list(taxonomy_mode)
    reviews = []
    seen_categories = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) < 2:
                raise MalformedLine(f"line {lineno}: no quads")
            sentence = fields[0]
            tokens = sentence.split()
            quads = []
            for group in fields[1:]:
                parts = group.split()
                if len(parts) != 4:
                    raise MalformedLine(
                        f"line {lineno}: quad group {group!r} has "
                        f"{len(parts)} fields, expected 4"
                    )
                a_span, cat_tok, senti_tok, o_span = parts
                aspect = _resolve_span(
                    tokens, *_parse_span(a_span, lineno), lineno, inclusive_end
                )
                opinion = _resolve_span(
                    tokens, *_parse_span(o_span, lineno), lineno, inclusive_end
                )
                if cat_tok.isdigit() and fixed is not None:
                    idx = int(cat_tok)
                    if idx >= len(fixed):
                        raise UnknownCategory(
                            f"line {lineno}: category index {idx} out of range"
                        )
                    category = fixed[idx]
                else:
                    category = cat_tok
                    if fixed is not None and category not in fixed:
                        raise UnknownCategory(
                            f"line {lineno}: category {category!r} not in taxonomy"
                        )
                try:
                    polarity = sentiment_index[int(senti_tok)]
                except (KeyError, ValueError):
                    raise UnknownSentimentIndex(
                        f"line {lineno}: sentiment index {senti_tok!r}"
                    ) from None
                if category not in seen_categories:
                    seen_categories.append(category)
                quads.append(AcosQuad(aspect, category, opinion, polarity))
            reviews.append(Review(id=f"{split}-{lineno}", text=sentence, quads=quads))
    categories = fixed if fixed is not None else sorted(seen_categories)
    return DatasetManifest(
        name=name or str(path), split=split, taxonomy=Taxonomy(categories), reviews=reviews
    )


def _term_to_json(term):
    return IMPLICIT_MARKER if term is IMPLICIT else term


def _term_from_json(value):
    return IMPLICIT if value == IMPLICIT_MARKER else value


def quad_to_json(quad: AcosQuad) -> dict:
    return {
        "aspect": _term_to_json(quad.aspect),
        "category": quad.category,
        "opinion": _term_to_json(quad.opinion),
        "polarity": quad.polarity,
    }


def quad_from_json(obj: dict) -> AcosQuad:
    return AcosQuad(
        aspect=_term_from_json(obj["aspect"]),
        category=obj["category"],
        opinion=_term_from_json(obj["opinion"]),
        polarity=obj["polarity"],
    )


def write_records(manifest: DatasetManifest, path) -> None:
    """Write a manifest as canonical records (header line, then reviews)."""
    with open(path, "w", encoding="utf-8") as fh:
        header = {
            "kind": "manifest",
            "name": manifest.name,
            "split": manifest.split,
            "taxonomy": list(manifest.taxonomy),
        }
        fh.write(json.dumps(header, ensure_ascii=False) + "\n")
        for review in manifest.reviews:
            rec = {
                "id": review.id,
                "text": review.text,
                "quads": [quad_to_json(q) for q in review.quads],
            }
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def _require(obj, key, lineno):
    if key not in obj:
        raise SchemaViolation(f"line {lineno}: missing field {key!r}")
    return obj[key]


def read_records(path) -> DatasetManifest:
    """Read a canonical manifest file; inverse of :func:`write_records`."""
    reviews = []
    header = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError:
                raise SchemaViolation(f"line {lineno}: not a valid record") from None
            if lineno == 1 and obj.get("kind") == "manifest":
                header = obj
                continue
            text = _require(obj, "text", lineno)
            quads = [quad_from_json(q) for q in _require(obj, "quads", lineno)]
            reviews.append(Review(id=_require(obj, "id", lineno), text=text, quads=quads))
    if header is None:
        raise SchemaViolation("line 1: missing manifest header record")
    return DatasetManifest(
        name=header["name"],
        split=header["split"],
        taxonomy=Taxonomy(header["taxonomy"]),
        reviews=reviews,
    )


def validate_manifest(manifest: DatasetManifest) -> None:
    """Check manifest invariants: categories in taxonomy, explicit terms
    verbatim substrings of their review text."""
    for review in manifest.reviews:
        for quad in review.quads:
            if quad.category not in set(manifest.taxonomy):
                raise UnknownCategory(
                    f"review {review.id}: category {quad.category!r} not in taxonomy"
                )
            for term in (quad.aspect, quad.opinion):
                if term is not IMPLICIT and term not in review.text:
                    raise AbsaError(
                        f"review {review.id}: term {term!r} not a substring of text"
                    )

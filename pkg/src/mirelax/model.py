"""Query data model and the query-string / topic-file syntax.

A query carries two ordered term groups: formulae, written between
dollar signs, and keywords, written either as bare words or as quoted
multi-word phrases.  Formula content is an opaque token; it is only
whitespace-normalized, never interpreted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import (
    EmptyMask,
    EmptyQuery,
    FormatError,
    MaskShapeMismatch,
    UnbalancedDelimiter,
)

_WS_RUN = re.compile(r"\s+")


def normalize_ws(text: str) -> str:
    """Strip and collapse internal whitespace runs to single spaces."""
    return _WS_RUN.sub(" ", text.strip())


@dataclass(frozen=True)
class Query:
    """An ordered formula group plus an ordered keyword group.

    Group order is significant: the rightmost-out relaxation removes
    terms from the tail of each group.
    """

    topic_id: str
    formulae: tuple[str, ...]
    keywords: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.formulae and not self.keywords:
            raise EmptyQuery(f"query {self.topic_id!r} has no terms")


@dataclass(frozen=True)
class SubqueryMask:
    """Bit vectors marking which terms of each group a subquery keeps."""

    formula_bits: tuple[bool, ...]
    keyword_bits: tuple[bool, ...]

    def __post_init__(self) -> None:
        if not any(self.formula_bits) and not any(self.keyword_bits):
            raise EmptyMask("mask selects no terms")


@dataclass(frozen=True)
class Subquery:
    """The subset of a query selected by a mask, group order preserved."""

    mask: SubqueryMask
    formulae: tuple[str, ...]
    keywords: tuple[str, ...]


@dataclass(frozen=True)
class Hit:
    doc_id: str
    score: float


@dataclass(frozen=True)
class ResultList:
    """Ranked hits of one subquery.

    Scores are only comparable to other hits in the same list.  Hits are
    ordered by score descending, ties broken by doc id ascending, with
    no duplicate doc ids.
    """

    subquery_index: int
    hits: tuple[Hit, ...]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        prev: Hit | None = None
        for hit in self.hits:
            if hit.doc_id in seen:
                raise ValueError(f"duplicate doc id {hit.doc_id!r} in result list")
            seen.add(hit.doc_id)
            if prev is not None and (hit.score, prev.doc_id) > (prev.score, hit.doc_id):
                raise ValueError("result list not sorted by (score desc, doc_id asc)")
            prev = hit


def parse_query(raw: str, topic_id: str) -> Query:
    """Parse ``$...$`` formula spans, quoted phrases, and bare words.

    Spans are scanned left to right; a delimiter opened inside another
    span type is literal content.  Span edges act as word boundaries for
    the surrounding bare text.
    """
    if not raw.strip():
        raise EmptyQuery(f"query {topic_id!r} is empty")
    formulae: list[str] = []
    keywords: list[str] = []
    bare: list[str] = []

    def flush_bare() -> None:
        keywords.extend("".join(bare).split())
        bare.clear()

    i, n = 0, len(raw)
    while i < n:
        ch = raw[i]
        if ch == "$":
            flush_bare()
            end = raw.find("$", i + 1)
            if end < 0:
                raise UnbalancedDelimiter(f"query {topic_id!r}: unclosed '$' span")
            term = normalize_ws(raw[i + 1 : end])
            if term:
                formulae.append(term)
            i = end + 1
        elif ch == '"':
            flush_bare()
            end = raw.find('"', i + 1)
            if end < 0:
                raise UnbalancedDelimiter(f"query {topic_id!r}: unclosed '\"' span")
            term = normalize_ws(raw[i + 1 : end])
            if term:
                keywords.append(term)
            i = end + 1
        else:
            bare.append(ch)
            i += 1
    flush_bare()
    if not formulae and not keywords:
        raise EmptyQuery(f"query {topic_id!r} has no terms")
    return Query(topic_id, tuple(formulae), tuple(keywords))


def format_query(query: Query) -> str:
    """Render a query back to its string syntax; inverse of parse_query."""
    parts = [f"${formula}$" for formula in query.formulae]
    for keyword in query.keywords:
        parts.append(f'"{keyword}"' if " " in keyword else keyword)
    return " ".join(parts)


def render_mask(mask: SubqueryMask) -> str:
    """Render as formula bits, hyphen, keyword bits, e.g. ``10-111``."""
    fbits = "".join("1" if b else "0" for b in mask.formula_bits)
    kbits = "".join("1" if b else "0" for b in mask.keyword_bits)
    return f"{fbits}-{kbits}"


def parse_mask(text: str) -> SubqueryMask:
    """Inverse of render_mask."""
    left, sep, right = text.partition("-")
    if not sep or not set(left + right) <= {"0", "1"}:
        raise FormatError(f"invalid mask string {text!r}")
    return SubqueryMask(
        tuple(c == "1" for c in left),
        tuple(c == "1" for c in right),
    )


def apply_mask(query: Query, mask: SubqueryMask) -> Subquery:
    """Select the masked subset of the query's terms, order preserved."""
    if len(mask.formula_bits) != len(query.formulae) or len(mask.keyword_bits) != len(
        query.keywords
    ):
        raise MaskShapeMismatch(
            f"mask shape {len(mask.formula_bits)}-{len(mask.keyword_bits)} does not "
            f"fit query with {len(query.formulae)} formulae and "
            f"{len(query.keywords)} keywords"
        )
    if not any(mask.formula_bits) and not any(mask.keyword_bits):
        raise EmptyMask("mask selects no terms")
    return Subquery(
        mask,
        tuple(t for t, keep in zip(query.formulae, mask.formula_bits) if keep),
        tuple(t for t, keep in zip(query.keywords, mask.keyword_bits) if keep),
    )


def full_mask(query: Query) -> SubqueryMask:
    """The all-ones mask selecting the entire query."""
    return SubqueryMask(
        (True,) * len(query.formulae),
        (True,) * len(query.keywords),
    )


def parse_topic_line(line: str) -> tuple[str, str] | None:
    """Split one topic-file line into (topic_id, raw query).

    Returns None for blank lines and ``#`` comments.
    """
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    topic_id, sep, raw = line.rstrip("\n").partition("\t")
    if not sep or not topic_id.strip() or not raw.strip():
        raise FormatError(f"topic line needs '<topic_id><TAB><query>': {line!r}")
    return topic_id.strip(), raw


def read_topics(path: str | Path) -> list[Query]:
    """Parse a whole topic file strictly, raising on the first bad line."""
    queries: list[Query] = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            try:
                pair = parse_topic_line(line)
            except FormatError as exc:
                raise FormatError(f"{path}:{line_no}: {exc}") from exc
            if pair is None:
                continue
            topic_id, raw = pair
            queries.append(parse_query(raw, topic_id))
    return queries

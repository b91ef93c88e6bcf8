"""Desk-scale in-memory search backend.

Documents mix free text with ``$...$`` math spans.  Text is indexed
positionally (for exact phrase keywords), math spans as opaque
whitespace-normalized tokens matched by string equality.  A subquery
matches a document only if every formula and every keyword of the
subquery matches; an empty group imposes no constraint.  Scoring is a
plain TF-IDF sum, which is all the relaxation and merging layers need.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import DuplicateDocId, EmptySubquery, FormatError, MalformedDocument
from .model import Hit, ResultList, Subquery, normalize_ws

_NON_ALNUM = re.compile(r"[\W_]+", re.UNICODE)

SNAPSHOT_FORMAT = "mirelax-index"
SNAPSHOT_VERSION = 1


def tokenize_text(text: str) -> list[str]:
    """Lowercase and split on any non-alphanumeric character."""
    return [t for t in _NON_ALNUM.split(text.lower()) if t]


@dataclass(frozen=True)
class Document:
    """One retrieval unit: positional text tokens plus math tokens."""

    doc_id: str
    text_tokens: tuple[str, ...]
    math_tokens: frozenset[str]


def parse_document(doc_id: str, body: str) -> Document:
    """Extract ``$...$`` spans as math tokens and tokenize the rest."""
    parts = body.split("$")
    if len(parts) % 2 == 0:
        raise MalformedDocument(f"document {doc_id!r}: unbalanced '$' in body")
    text_parts: list[str] = []
    math_tokens: list[str] = []
    for i, part in enumerate(parts):
        if i % 2:
            token = normalize_ws(part)
            if token:
                math_tokens.append(token)
        else:
            text_parts.append(part)
    return Document(
        doc_id,
        tuple(tokenize_text(" ".join(text_parts))),
        frozenset(math_tokens),
    )


class Index:
    """Immutable positional inverted index over a document collection.

    ``text_postings`` maps a token to (doc_id, tf, positions) entries;
    ``math_postings`` maps a formula string to the doc ids containing
    it.  Document frequency of a term is the length of its postings
    list.  Safe to share across threads once built.
    """

    def __init__(self, documents: Sequence[Document]):
        docs: list[Document] = []
        seen: set[str] = set()
        text_postings: dict[str, list[tuple[str, int, tuple[int, ...]]]] = {}
        math_postings: dict[str, list[str]] = {}
        for doc in documents:
            if doc.doc_id in seen:
                raise DuplicateDocId(f"duplicate doc id {doc.doc_id!r}")
            seen.add(doc.doc_id)
            docs.append(doc)
            positions: dict[str, list[int]] = {}
            for pos, token in enumerate(doc.text_tokens):
                positions.setdefault(token, []).append(pos)
            for token, pos_list in positions.items():
                text_postings.setdefault(token, []).append(
                    (doc.doc_id, len(pos_list), tuple(pos_list))
                )
            for token in sorted(doc.math_tokens):
                math_postings.setdefault(token, []).append(doc.doc_id)
        self.documents: tuple[Document, ...] = tuple(docs)
        self.doc_count: int = len(docs)
        self.text_postings = text_postings
        self.math_postings = math_postings

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Index):
            return NotImplemented
        return (
            self.documents == other.documents
            and self.text_postings == other.text_postings
            and self.math_postings == other.math_postings
        )


def build_index(raw_docs: Iterable[tuple[str, str]]) -> Index:
    """Parse and index a stream of (doc_id, body) pairs."""
    return Index([parse_document(doc_id, body) for doc_id, body in raw_docs])


def _term_freqs(index: Index, word: str) -> dict[str, int]:
    return {doc_id: tf for doc_id, tf, _ in index.text_postings.get(word, ())}


def _phrase_freqs(index: Index, words: Sequence[str]) -> dict[str, int]:
    """Documents containing the words at adjacent positions, with the
    number of phrase occurrences in each."""
    postings = [index.text_postings.get(w) for w in words]
    if any(p is None for p in postings):
        return {}
    position_maps = [
        {doc_id: positions for doc_id, _, positions in p} for p in postings
    ]
    common = set(position_maps[0])
    for pmap in position_maps[1:]:
        common &= pmap.keys()
    freqs: dict[str, int] = {}
    for doc_id in sorted(common):
        rest = [set(pmap[doc_id]) for pmap in position_maps[1:]]
        count = sum(
            1
            for start in position_maps[0][doc_id]
            if all(start + offset in posset for offset, posset in enumerate(rest, 1))
        )
        if count:
            freqs[doc_id] = count
    return freqs


def search(
    index: Index,
    subquery: Subquery,
    limit: int = 1000,
    subquery_index: int = 0,
) -> ResultList:
    """Run one subquery against the index.

    A candidate document must contain every formula (exact math-token
    match) and every keyword (multi-word keywords as exact adjacent
    phrases) of the subquery.  Score(d) is the sum over the subquery's
    terms of (1 + ln tf) * ln(1 + N/df); results are sorted by score
    descending, doc id ascending on ties, and cut to ``limit``.
    """
    if not subquery.formulae and not subquery.keywords:
        raise EmptySubquery("subquery has no terms")
    if limit < 1:
        raise ValueError("limit must be >= 1")

    # tf maps per term, in subquery order; None marks a term found nowhere.
    term_freqs: list[Mapping[str, int]] = []
    for formula in subquery.formulae:
        doc_ids = index.math_postings.get(formula, ())
        term_freqs.append(dict.fromkeys(doc_ids, 1))
    for keyword in subquery.keywords:
        words = tokenize_text(keyword)
        if not words:
            term_freqs.append({})
        elif len(words) == 1:
            term_freqs.append(_term_freqs(index, words[0]))
        else:
            term_freqs.append(_phrase_freqs(index, words))

    candidates: set[str] | None = None
    for freqs in term_freqs:
        candidates = set(freqs) if candidates is None else candidates & freqs.keys()
        if not candidates:
            return ResultList(subquery_index, ())

    n = index.doc_count
    scored = []
    for doc_id in sorted(candidates or ()):
        score = 0.0
        for freqs in term_freqs:
            tf = freqs[doc_id]
            score += (1.0 + math.log(tf)) * math.log(1.0 + n / len(freqs))
        scored.append((doc_id, score))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return ResultList(
        subquery_index,
        tuple(Hit(doc_id, score) for doc_id, score in scored[:limit]),
    )


def read_corpus_file(path: str | Path) -> list[tuple[str, str]]:
    """Read a ``<doc_id><TAB><body>`` per-line corpus file."""
    docs: list[tuple[str, str]] = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            doc_id, sep, body = line.rstrip("\n").partition("\t")
            if not sep or not doc_id.strip():
                raise FormatError(
                    f"{path}:{line_no}: corpus line needs '<doc_id><TAB><body>'"
                )
            docs.append((doc_id.strip(), body))
    return docs


def read_corpus_dir(path: str | Path) -> list[tuple[str, str]]:
    """Read a directory of ``<doc_id>.txt`` files, sorted by doc id."""
    docs = []
    for file in sorted(Path(path).glob("*.txt")):
        docs.append((file.stem, file.read_text(encoding="utf-8")))
    return docs


def load_corpus(path: str | Path) -> list[tuple[str, str]]:
    path = Path(path)
    return read_corpus_dir(path) if path.is_dir() else read_corpus_file(path)


def save_index(index: Index, path: str | Path) -> None:
    """Write a JSON snapshot; loading it reproduces the index exactly."""
    payload = {
        "format": SNAPSHOT_FORMAT,
        "version": SNAPSHOT_VERSION,
        "documents": [
            {
                "id": doc.doc_id,
                "text": list(doc.text_tokens),
                "math": sorted(doc.math_tokens),
            }
            for doc in index.documents
        ],
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, ensure_ascii=False)
        handle.write("\n")


def load_index(path: str | Path) -> Index:
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    if payload.get("format") != SNAPSHOT_FORMAT:
        raise FormatError(f"{path}: not a {SNAPSHOT_FORMAT} snapshot")
    if payload.get("version") != SNAPSHOT_VERSION:
        raise FormatError(f"{path}: unsupported snapshot version")
    documents = [
        Document(entry["id"], tuple(entry["text"]), frozenset(entry["math"]))
        for entry in payload["documents"]
    ]
    return Index(documents)

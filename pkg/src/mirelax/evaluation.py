"""TREC-style evaluation: qrels, run files, Bpref, MAP, and P@k.

Judgment pools are incomplete, so the three metric families treat
unjudged documents differently: Bpref ignores them entirely (it depends
only on the relative order of judged documents), while average
precision and precision at k count them as non-relevant.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import AbstractSet, Iterable, Mapping, Sequence

from .errors import FormatError, NoEvaluableTopics, NoRelevantJudgments
from .merging import MergedList

MAX_RUN_DEPTH = 1000

GRADE_RANGE = range(0, 5)


@dataclass(frozen=True)
class Qrels:
    """Graded judgments: topic id -> doc id -> grade in 0..4."""

    judgments: dict[str, dict[str, int]]


@dataclass(frozen=True)
class BinaryQrels:
    """Binarized judgments: grade 0 is non-relevant, 1..4 relevant.

    Pairs absent from both sets are unjudged, which is distinct from
    judged non-relevant.
    """

    relevant: dict[str, frozenset[str]]
    nonrelevant: dict[str, frozenset[str]]


@dataclass(frozen=True)
class RunEntry:
    doc_id: str
    rank: int
    score: float
    tag: str


@dataclass(frozen=True)
class TopicMetrics:
    bpref: float
    average_precision: float
    precision_at_1: float
    precision_at_5: float
    precision_at_10: float


@dataclass(frozen=True)
class MetricsReport:
    """Macro averages over every qrels topic with at least one relevant
    document; topics missing from the run score zero."""

    per_topic: dict[str, TopicMetrics]
    bpref: float
    mean_average_precision: float
    precision_at_1: float
    precision_at_5: float
    precision_at_10: float
    evaluated_topics: int
    excluded_topics: int


def binarize(qrels: Qrels) -> BinaryQrels:
    """Collapse grades: 0 -> non-relevant, 1..4 -> relevant."""
    relevant: dict[str, frozenset[str]] = {}
    nonrelevant: dict[str, frozenset[str]] = {}
    for topic_id, docs in qrels.judgments.items():
        relevant[topic_id] = frozenset(d for d, g in docs.items() if g > 0)
        nonrelevant[topic_id] = frozenset(d for d, g in docs.items() if g == 0)
    return BinaryQrels(relevant, nonrelevant)


def bpref(
    ranking: Sequence[str],
    relevant: AbstractSet[str],
    nonrelevant: AbstractSet[str],
) -> float:
    """Binary preference over the judged documents of one topic.

    Each retrieved judged-relevant document contributes
    1 - min(n_above, min(R, N)) / min(R, N), where n_above counts the
    judged non-relevant documents ranked above it; with no judged
    non-relevant documents each contributes 1.  Unjudged documents are
    invisible to this metric.
    """
    total_relevant = len(relevant)
    total_nonrelevant = len(nonrelevant)
    if total_relevant == 0:
        raise NoRelevantJudgments("topic has no judged-relevant documents")
    bound = min(total_relevant, total_nonrelevant)
    nonrel_above = 0
    total = 0.0
    for doc_id in ranking:
        if doc_id in nonrelevant:
            nonrel_above += 1
        elif doc_id in relevant:
            if total_nonrelevant == 0:
                total += 1.0
            else:
                total += 1.0 - min(nonrel_above, bound) / bound
    return total / total_relevant


def average_precision(ranking: Sequence[str], relevant: AbstractSet[str]) -> float:
    """Mean of the precision at each retrieved relevant document's rank.

    Unjudged documents occupy ranks and count as non-relevant.
    """
    total_relevant = len(relevant)
    if total_relevant == 0:
        raise NoRelevantJudgments("topic has no judged-relevant documents")
    hits = 0
    total = 0.0
    for rank, doc_id in enumerate(ranking, start=1):
        if doc_id in relevant:
            hits += 1
            total += hits / rank
    return total / total_relevant


def precision_at_k(ranking: Sequence[str], relevant: AbstractSet[str], k: int) -> float:
    """Fraction of the first k ranks holding relevant documents; a run
    shorter than k counts the missing ranks as non-relevant."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return sum(1 for doc_id in ranking[:k] if doc_id in relevant) / k


def evaluate(run: Mapping[str, Sequence[RunEntry]], qrels: Qrels) -> MetricsReport:
    """Score a run against qrels, macro-averaging over topics.

    Topics judged with no relevant document are excluded from the
    average (and counted); topics in the qrels but absent from the run
    contribute zero to every metric.  Raises when the run shares no
    evaluable topic with the qrels.
    """
    binary = binarize(qrels)
    evaluable = sorted(t for t, docs in binary.relevant.items() if docs)
    excluded = len(binary.relevant) - len(evaluable)
    if not any(t in run for t in evaluable):
        raise NoEvaluableTopics(
            "run and qrels share no topic with relevant judgments"
        )
    per_topic: dict[str, TopicMetrics] = {}
    for topic_id in evaluable:
        ranking = [entry.doc_id for entry in run.get(topic_id, ())]
        relevant = binary.relevant[topic_id]
        nonrelevant = binary.nonrelevant[topic_id]
        per_topic[topic_id] = TopicMetrics(
            bpref=bpref(ranking, relevant, nonrelevant),
            average_precision=average_precision(ranking, relevant),
            precision_at_1=precision_at_k(ranking, relevant, 1),
            precision_at_5=precision_at_k(ranking, relevant, 5),
            precision_at_10=precision_at_k(ranking, relevant, 10),
        )
    count = len(evaluable)
    return MetricsReport(
        per_topic=per_topic,
        bpref=sum(m.bpref for m in per_topic.values()) / count,
        mean_average_precision=sum(m.average_precision for m in per_topic.values())
        / count,
        precision_at_1=sum(m.precision_at_1 for m in per_topic.values()) / count,
        precision_at_5=sum(m.precision_at_5 for m in per_topic.values()) / count,
        precision_at_10=sum(m.precision_at_10 for m in per_topic.values()) / count,
        evaluated_topics=count,
        excluded_topics=excluded,
    )


def parse_qrels(lines: Iterable[str], source: str = "<qrels>") -> Qrels:
    """Parse whitespace-separated ``topic_id 0 doc_id grade`` lines."""
    judgments: dict[str, dict[str, int]] = {}
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) != 4:
            raise FormatError(f"{source}:{line_no}: expected 4 fields, got {len(fields)}")
        topic_id, _iteration, doc_id, grade_text = fields
        try:
            grade = int(grade_text)
        except ValueError:
            raise FormatError(f"{source}:{line_no}: grade {grade_text!r} is not an integer")
        if grade not in GRADE_RANGE:
            raise FormatError(f"{source}:{line_no}: grade {grade} outside 0..4")
        topic = judgments.setdefault(topic_id, {})
        if doc_id in topic:
            raise FormatError(
                f"{source}:{line_no}: duplicate judgment for ({topic_id}, {doc_id})"
            )
        topic[doc_id] = grade
    return Qrels(judgments)


def read_qrels(path: str | Path) -> Qrels:
    with open(path, encoding="utf-8") as handle:
        return parse_qrels(handle, source=str(path))


def write_qrels(qrels: Qrels, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for topic_id in sorted(qrels.judgments):
            for doc_id in sorted(qrels.judgments[topic_id]):
                handle.write(f"{topic_id} 0 {doc_id} {qrels.judgments[topic_id][doc_id]}\n")


def parse_run(lines: Iterable[str], source: str = "<run>") -> dict[str, list[RunEntry]]:
    """Parse ``topic_id Q0 doc_id rank score tag`` lines and validate
    the per-topic invariants: contiguous 1-based ranks, non-increasing
    scores, no duplicate documents, at most 1,000 entries."""
    run: dict[str, list[RunEntry]] = {}
    seen_docs: dict[str, set[str]] = {}
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) != 6:
            raise FormatError(f"{source}:{line_no}: expected 6 fields, got {len(fields)}")
        topic_id, _q0, doc_id, rank_text, score_text, tag = fields
        try:
            rank = int(rank_text)
            score = float(score_text)
        except ValueError:
            raise FormatError(f"{source}:{line_no}: bad rank or score")
        entries = run.setdefault(topic_id, [])
        docs = seen_docs.setdefault(topic_id, set())
        if rank != len(entries) + 1:
            raise FormatError(
                f"{source}:{line_no}: rank {rank} breaks contiguity for topic {topic_id}"
            )
        if entries and score > entries[-1].score:
            raise FormatError(f"{source}:{line_no}: scores increase for topic {topic_id}")
        if doc_id in docs:
            raise FormatError(
                f"{source}:{line_no}: duplicate document {doc_id} for topic {topic_id}"
            )
        if len(entries) >= MAX_RUN_DEPTH:
            raise FormatError(
                f"{source}:{line_no}: more than {MAX_RUN_DEPTH} entries for topic {topic_id}"
            )
        docs.add(doc_id)
        entries.append(RunEntry(doc_id, rank, score, tag))
    return run


def read_run(path: str | Path) -> dict[str, list[RunEntry]]:
    with open(path, encoding="utf-8") as handle:
        return parse_run(handle, source=str(path))


def run_from_merged(merged_lists: Iterable[MergedList], tag: str) -> dict[str, list[RunEntry]]:
    """Convert merged result lists to run entries keyed by topic."""
    run: dict[str, list[RunEntry]] = {}
    for merged in merged_lists:
        run[merged.topic_id] = [
            RunEntry(item.doc_id, rank, item.final_score, tag)
            for rank, item in enumerate(merged.items, start=1)
        ]
    return run


def format_run_lines(run: Mapping[str, Sequence[RunEntry]]) -> list[str]:
    """Render run lines sorted by topic id; scores use shortest exact
    float notation so files round-trip bit for bit."""
    lines = []
    for topic_id in sorted(run):
        for entry in run[topic_id]:
            lines.append(
                f"{topic_id} Q0 {entry.doc_id} {entry.rank} {entry.score!r} {entry.tag}"
            )
    return lines


def write_run(run: Mapping[str, Sequence[RunEntry]], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for line in format_run_lines(run):
            handle.write(line + "\n")

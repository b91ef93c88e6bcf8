"""Weighted round-robin strip interleaving of per-subquery result lists.

Backend scores are only comparable within one result list, so the
merger never compares them across lists.  Instead it walks the lists in
plan order, round by round, taking a strip of top hits from each list;
strip widths come from the plan, widest for the least modified
subquery.  Output scores are synthetic rank scores.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .expansion import SubqueryPlan
from .model import ResultList, render_mask


@dataclass(frozen=True)
class MergedItem:
    doc_id: str
    final_score: float
    source_subquery: int
    source_rank: int


@dataclass(frozen=True)
class MergedList:
    topic_id: str
    items: tuple[MergedItem, ...]


@dataclass(frozen=True)
class SubqueryStats:
    subquery_index: int
    mask: str
    strip_width: int
    hits: int
    fraction: float


def strip_merge(
    lists: Sequence[tuple[ResultList, int]],
    limit: int,
    topic_id: str = "",
) -> MergedList:
    """Interleave strips of hits from the given lists, in list order.

    Each round takes up to ``width`` not-yet-output documents from every
    list.  A document already in the output is skipped and does not
    consume strip budget, so the strip scans deeper for new documents.
    Exhausted lists are skipped without changing the widths of the
    others.  Merging stops at ``limit`` or when every list is drained.

    The item at 0-based output position i gets the synthetic score
    (limit - i) / limit; source fields record which list and which rank
    the document came from.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    for _, width in lists:
        if width < 1:
            raise ValueError("strip widths must be >= 1")
    cursors = [0] * len(lists)
    seen: set[str] = set()
    items: list[MergedItem] = []
    while len(items) < limit:
        advanced = False
        for i, (result_list, width) in enumerate(lists):
            hits = result_list.hits
            pos = cursors[i]
            taken = 0
            while taken < width and pos < len(hits) and len(items) < limit:
                hit = hits[pos]
                pos += 1
                if hit.doc_id in seen:
                    continue
                seen.add(hit.doc_id)
                items.append(
                    MergedItem(
                        doc_id=hit.doc_id,
                        final_score=(limit - len(items)) / limit,
                        source_subquery=result_list.subquery_index,
                        source_rank=pos,
                    )
                )
                taken += 1
            if pos != cursors[i]:
                advanced = True
                cursors[i] = pos
            if len(items) >= limit:
                break
        if not advanced:
            break
    return MergedList(topic_id, tuple(items))


def merge_stats(
    plan: SubqueryPlan,
    lists: Sequence[ResultList],
    per_subquery_limit: int = 1000,
) -> list[SubqueryStats]:
    """Per-subquery hit counts and their fraction of the fetch limit."""
    if len(lists) != len(plan.entries):
        raise ValueError(
            f"plan has {len(plan.entries)} entries but {len(lists)} result lists given"
        )
    rows = []
    for i, (entry, result_list) in enumerate(zip(plan.entries, lists)):
        count = len(result_list.hits)
        rows.append(
            SubqueryStats(
                subquery_index=i,
                mask=render_mask(entry.subquery.mask),
                strip_width=entry.strip_width,
                hits=count,
                fraction=count / per_subquery_limit,
            )
        )
    return rows

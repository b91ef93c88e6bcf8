"""Subquery plan generation for the relaxation strategies.

Each strategy turns one query into an ordered list of subqueries, each
with the strip width the merger will use.  Widths put the least
modified subqueries first and widest, so their hits dominate the top
of the merged list.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

from .errors import EmptyGroup, TooManyTerms
from .model import Query, Subquery, SubqueryMask, apply_mask, render_mask

APS_MAX_TERMS = 16


class Strategy(str, Enum):
    OQO = "oqo"
    MTO = "mto"
    TTO = "tto"
    LRO = "lro"
    LOO = "loo"
    LOOTO = "looto"
    APS = "aps"


@dataclass(frozen=True)
class PlanEntry:
    subquery: Subquery
    strip_width: int
    mask_weight: int


@dataclass(frozen=True)
class SubqueryPlan:
    strategy: Strategy
    entries: tuple[PlanEntry, ...]


def mask_weight(mask: SubqueryMask) -> int:
    """Set formula bits count double, so math-bearing subqueries outrank
    keyword-only ones of the same size."""
    return 2 * sum(mask.formula_bits) + sum(mask.keyword_bits)


def reverse_query(query: Query) -> Query:
    """Reverse the term order inside each group; an involution."""
    return Query(
        query.topic_id,
        tuple(reversed(query.formulae)),
        tuple(reversed(query.keywords)),
    )


def _mask_for(query: Query, formulae_kept: int, keywords_kept: int) -> SubqueryMask:
    """Mask keeping the first n terms of each group."""
    return SubqueryMask(
        tuple(i < formulae_kept for i in range(len(query.formulae))),
        tuple(i < keywords_kept for i in range(len(query.keywords))),
    )


def _drop_mask(query: Query, dropped: tuple[int, ...]) -> SubqueryMask:
    """Mask clearing the given positions of the combined f+k bit string."""
    f = len(query.formulae)
    total = f + len(query.keywords)
    bits = [i not in dropped for i in range(total)]
    return SubqueryMask(tuple(bits[:f]), tuple(bits[f:]))


def _entry(query: Query, mask: SubqueryMask, width: int) -> PlanEntry:
    return PlanEntry(apply_mask(query, mask), width, mask_weight(mask))


def _ordered_band(query: Query, masks: list[SubqueryMask], width: int) -> list[PlanEntry]:
    """Order a band by mask weight descending, ties by the rendered mask
    string descending (the tie order is fixed here for reproducibility)."""
    masks = sorted(masks, key=render_mask, reverse=True)
    masks.sort(key=mask_weight, reverse=True)
    return [_entry(query, mask, width) for mask in masks]


def expand_oqo(query: Query) -> SubqueryPlan:
    """The original query only."""
    mask = _mask_for(query, len(query.formulae), len(query.keywords))
    return SubqueryPlan(Strategy.OQO, (_entry(query, mask, 1),))


def expand_mto(query: Query) -> SubqueryPlan:
    """Math terms only: all keywords removed."""
    if not query.formulae:
        raise EmptyGroup(f"query {query.topic_id!r} has no formulae")
    mask = _mask_for(query, len(query.formulae), 0)
    return SubqueryPlan(Strategy.MTO, (_entry(query, mask, 1),))


def expand_tto(query: Query) -> SubqueryPlan:
    """Text terms only: all formulae removed."""
    if not query.keywords:
        raise EmptyGroup(f"query {query.topic_id!r} has no keywords")
    mask = _mask_for(query, 0, len(query.keywords))
    return SubqueryPlan(Strategy.TTO, (_entry(query, mask, 1),))


def expand_lro(query: Query) -> SubqueryPlan:
    """Leave rightmost out.

    The original query first, then keywords dropped rightmost-first one
    at a time down to formulae only, then, with all keywords restored,
    formulae dropped rightmost-first down to keywords only.  Strip
    widths are positional: n, n-1, ..., 1 over the n entries.  When one
    group is empty, terms of the other group are dropped rightmost-first
    stopping before the subquery would become empty.
    """
    f, k = len(query.formulae), len(query.keywords)
    masks = [_mask_for(query, f, k)]
    if f and k:
        masks.extend(_mask_for(query, f, k - i) for i in range(1, k + 1))
        masks.extend(_mask_for(query, f - j, k) for j in range(1, f + 1))
    elif f:
        masks.extend(_mask_for(query, f - j, 0) for j in range(1, f))
    else:
        masks.extend(_mask_for(query, 0, k - i) for i in range(1, k))
    total = len(masks)
    entries = tuple(
        _entry(query, mask, total - i) for i, mask in enumerate(masks)
    )
    return SubqueryPlan(Strategy.LRO, entries)


def _one_out_masks(query: Query) -> list[SubqueryMask]:
    total = len(query.formulae) + len(query.keywords)
    return [_drop_mask(query, (i,)) for i in range(total)]


def expand_loo(query: Query) -> SubqueryPlan:
    """The original query plus every subquery with exactly one component
    removed.  The original gets strip width 2, the rest width 1."""
    if len(query.formulae) + len(query.keywords) < 2:
        return SubqueryPlan(Strategy.LOO, expand_oqo(query).entries)
    original = _mask_for(query, len(query.formulae), len(query.keywords))
    entries = [_entry(query, original, 2)]
    entries.extend(_ordered_band(query, _one_out_masks(query), 1))
    return SubqueryPlan(Strategy.LOO, tuple(entries))


def expand_looto(query: Query) -> SubqueryPlan:
    """The original query (width 3), every one-component-out subquery
    (width 2), then every two-out subquery (width 1).  Bands that would
    empty the subquery are suppressed."""
    f, k = len(query.formulae), len(query.keywords)
    total = f + k
    original = _mask_for(query, f, k)
    entries = [_entry(query, original, 3)]
    if total >= 2:
        entries.extend(_ordered_band(query, _one_out_masks(query), 2))
    if total >= 3:
        two_out = [_drop_mask(query, pair) for pair in combinations(range(total), 2)]
        entries.extend(_ordered_band(query, two_out, 1))
    return SubqueryPlan(Strategy.LOOTO, tuple(entries))


def expand_aps(query: Query) -> SubqueryPlan:
    """All possible subqueries: every non-empty mask, strip width equal
    to its mask weight, ordered by weight descending."""
    f, k = len(query.formulae), len(query.keywords)
    total = f + k
    if total > APS_MAX_TERMS:
        raise TooManyTerms(
            f"query {query.topic_id!r} has {total} terms; "
            f"exhaustive enumeration is capped at {APS_MAX_TERMS}"
        )
    masks = []
    for pattern in range(1, 1 << total):
        bits = [bool(pattern & (1 << (total - 1 - i))) for i in range(total)]
        masks.append(SubqueryMask(tuple(bits[:f]), tuple(bits[f:])))
    masks = sorted(masks, key=render_mask, reverse=True)
    masks.sort(key=mask_weight, reverse=True)
    entries = tuple(_entry(query, mask, mask_weight(mask)) for mask in masks)
    return SubqueryPlan(Strategy.APS, entries)


_EXPANDERS = {
    Strategy.OQO: expand_oqo,
    Strategy.MTO: expand_mto,
    Strategy.TTO: expand_tto,
    Strategy.LRO: expand_lro,
    Strategy.LOO: expand_loo,
    Strategy.LOOTO: expand_looto,
    Strategy.APS: expand_aps,
}


def expand(query: Query, strategy: Strategy) -> SubqueryPlan:
    """Build the subquery plan for the given strategy."""
    return _EXPANDERS[strategy](query)

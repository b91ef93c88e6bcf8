"""Subquery plan generation for all seven strategies."""

import pytest
from hypothesis import given, strategies as st

from mirelax import (
    EmptyGroup,
    Query,
    Strategy,
    TooManyTerms,
    expand,
    expand_aps,
    expand_loo,
    expand_looto,
    expand_lro,
    expand_mto,
    expand_oqo,
    expand_tto,
    mask_weight,
    parse_mask,
    render_mask,
    reverse_query,
)

FULL = Query("T", ("f_1", "f_2"), ("k1", "k2", "k3"))


def masks_of(plan):
    return [render_mask(e.subquery.mask) for e in plan.entries]


def widths_of(plan):
    return [e.strip_width for e in plan.entries]


class TestMaskWeight:
    @pytest.mark.parametrize(
        "mask_text,expected",
        [("10-111", 5), ("11-111", 7), ("00-001", 1), ("11-000", 4), ("-1", 1)],
    )
    def test_values(self, mask_text, expected):
        assert mask_weight(parse_mask(mask_text)) == expected


class TestOqoMtoTto:
    def test_oqo_single_full_entry(self):
        plan = expand_oqo(FULL)
        assert masks_of(plan) == ["11-111"]
        assert widths_of(plan) == [1]

    def test_oqo_single_keyword(self):
        plan = expand_oqo(Query("T", (), ("solo",)))
        assert masks_of(plan) == ["-1"]

    def test_mto_keeps_formulae(self):
        plan = expand_mto(FULL)
        assert masks_of(plan) == ["11-000"]
        assert plan.entries[0].subquery.formulae == ("f_1", "f_2")
        assert plan.entries[0].subquery.keywords == ()

    def test_tto_keeps_keywords(self):
        plan = expand_tto(FULL)
        assert masks_of(plan) == ["00-111"]
        assert plan.entries[0].subquery.keywords == ("k1", "k2", "k3")

    def test_mto_requires_formulae(self):
        with pytest.raises(EmptyGroup):
            expand_mto(Query("T", (), ("kw",)))

    def test_tto_requires_keywords(self):
        with pytest.raises(EmptyGroup):
            expand_tto(Query("T", ("f",), ()))


class TestLro:
    def test_golden_sequence(self):
        plan = expand_lro(FULL)
        assert masks_of(plan) == [
            "11-111",
            "11-110",
            "11-100",
            "11-000",
            "10-111",
            "00-111",
        ]
        assert widths_of(plan) == [6, 5, 4, 3, 2, 1]

    def test_terms_of_golden_sequence(self):
        plan = expand_lro(FULL)
        groups = [(e.subquery.formulae, e.subquery.keywords) for e in plan.entries]
        assert groups == [
            (("f_1", "f_2"), ("k1", "k2", "k3")),
            (("f_1", "f_2"), ("k1", "k2")),
            (("f_1", "f_2"), ("k1",)),
            (("f_1", "f_2"), ()),
            (("f_1",), ("k1", "k2", "k3")),
            ((), ("k1", "k2", "k3")),
        ]

    def test_keywords_only_degenerate(self):
        plan = expand_lro(Query("T", (), ("k1", "k2", "k3")))
        assert masks_of(plan) == ["-111", "-110", "-100"]
        assert widths_of(plan) == [3, 2, 1]

    def test_single_formula_degenerate(self):
        plan = expand_lro(Query("T", ("f",), ()))
        assert masks_of(plan) == ["1-"]
        assert widths_of(plan) == [1]

    def test_formulae_only_degenerate(self):
        plan = expand_lro(Query("T", ("f_1", "f_2"), ()))
        assert masks_of(plan) == ["11-", "10-"]


class TestLoo:
    def test_order_and_widths(self):
        plan = expand_loo(FULL)
        assert masks_of(plan) == [
            "11-111",
            "11-110",
            "11-101",
            "11-011",
            "10-111",
            "01-111",
        ]
        assert widths_of(plan) == [2, 1, 1, 1, 1, 1]

    def test_two_term_query(self):
        plan = expand_loo(Query("T", ("f",), ("k",)))
        assert masks_of(plan) == ["1-1", "1-0", "0-1"]
        assert widths_of(plan) == [2, 1, 1]

    def test_single_term_degenerate(self):
        plan = expand_loo(Query("T", (), ("solo",)))
        assert masks_of(plan) == ["-1"]
        assert widths_of(plan) == [1]


class TestLooto:
    def test_band_sizes(self):
        plan = expand_looto(FULL)
        assert len(plan.entries) == 16  # 1 + C(5,1) + C(5,2)
        assert widths_of(plan) == [3] + [2] * 5 + [1] * 10

    def test_two_term_query_suppresses_two_out(self):
        plan = expand_looto(Query("T", ("f",), ("k",)))
        assert masks_of(plan) == ["1-1", "1-0", "0-1"]
        assert widths_of(plan) == [3, 2, 2]

    def test_single_term(self):
        plan = expand_looto(Query("T", ("f",), ()))
        assert len(plan.entries) == 1

    def test_band_internal_order(self):
        plan = expand_looto(FULL)
        one_out = masks_of(plan)[1:6]
        assert one_out == ["11-110", "11-101", "11-011", "10-111", "01-111"]


class TestAps:
    def test_cardinality(self):
        plan = expand_aps(FULL)
        assert len(plan.entries) == 31

    def test_first_entry(self):
        plan = expand_aps(FULL)
        assert masks_of(plan)[0] == "11-111"
        assert plan.entries[0].strip_width == 7

    def test_weights_non_increasing_and_equal_width(self):
        plan = expand_aps(FULL)
        weights = [e.mask_weight for e in plan.entries]
        assert weights == sorted(weights, reverse=True)
        assert all(e.strip_width == e.mask_weight for e in plan.entries)

    def test_single_keyword(self):
        plan = expand_aps(Query("T", (), ("solo",)))
        assert masks_of(plan) == ["-1"]
        assert widths_of(plan) == [1]

    def test_term_cap(self):
        big = Query("T", tuple(f"f{i}" for i in range(9)), tuple(f"k{i}" for i in range(8)))
        with pytest.raises(TooManyTerms):
            expand_aps(big)


class TestReverseQuery:
    def test_reverses_each_group(self):
        rev = reverse_query(FULL)
        assert rev.formulae == ("f_2", "f_1")
        assert rev.keywords == ("k3", "k2", "k1")
        assert rev.topic_id == FULL.topic_id

    def test_single_term_unchanged(self):
        q = Query("T", (), ("solo",))
        assert reverse_query(q) == q

    def test_involution(self):
        assert reverse_query(reverse_query(FULL)) == FULL


_QUERIES = (
    st.tuples(
        st.lists(st.sampled_from(["fa", "fb", "fc"]), max_size=3, unique=True),
        st.lists(st.sampled_from(["ka", "kb", "kc", "kd"]), max_size=4, unique=True),
    )
    .filter(lambda groups: groups[0] or groups[1])
    .map(lambda groups: Query("T", tuple(groups[0]), tuple(groups[1])))
)


@given(query=_QUERIES, strategy=st.sampled_from(list(Strategy)))
def test_plan_invariants(query, strategy):
    if strategy is Strategy.MTO and not query.formulae:
        return
    if strategy is Strategy.TTO and not query.keywords:
        return
    plan = expand(query, strategy)
    masks = masks_of(plan)
    assert plan.entries, "plans are never empty"
    assert len(set(masks)) == len(masks), "masks are pairwise distinct"
    assert all(e.strip_width >= 1 for e in plan.entries)
    assert all(
        e.strip_width <= plan.entries[0].strip_width for e in plan.entries
    ), "no derived strip wider than the first entry's"
    assert all(
        e.mask_weight == mask_weight(e.subquery.mask) for e in plan.entries
    )
    for entry in plan.entries:
        assert entry.subquery.formulae or entry.subquery.keywords


@given(query=_QUERIES)
def test_original_first_when_both_groups_present(query):
    if not (query.formulae and query.keywords):
        return
    f, k = len(query.formulae), len(query.keywords)
    for strategy in (Strategy.LRO, Strategy.LOO, Strategy.LOOTO, Strategy.APS):
        plan = expand(query, strategy)
        first = plan.entries[0].subquery.mask
        assert all(first.formula_bits) and all(first.keyword_bits)
    lro = expand(query, Strategy.LRO)
    assert len(lro.entries) == 1 + f + k
    assert lro.entries[-1].subquery.formulae == ()
    aps = expand(query, Strategy.APS)
    assert len(aps.entries) == 2 ** (f + k) - 1


@given(query=_QUERIES)
def test_full_mask_weight_is_maximum(query):
    aps = expand(query, Strategy.APS)
    weights = [e.mask_weight for e in aps.entries]
    assert weights[0] == 2 * len(query.formulae) + len(query.keywords)
    assert weights[0] == max(weights)

import pytest
from hypothesis import given, settings, strategies as st

from tkgqa.algebra import (
    ALLEN_SIGNAL_WORDS,
    SIGNAL_WORDS,
    TSO_RULES,
    DurationDelta,
    IntervalSet,
    compare_duration,
    duration,
    intersection,
    negation,
    rank_facts,
    signal_word_for_semantic,
    tso,
    union,
)
from tkgqa.allen import ALLEN_DICTIONARY, RELATIONS_BY_KIND
from tkgqa.errors import ConfigError, DomainError
from tkgqa.timeline import NEG_INF, POS_INF, TimeInterval

from conftest import make_kg

GRID = range(-20, 21)


def coverage(iv_set):
    return {x for x in GRID if iv_set.contains_value(x)}


def brute_union(intervals):
    return {x for x in GRID for iv in intervals if iv.contains_value(x)}


def brute_intersection(intervals):
    return {x for x in GRID if all(iv.contains_value(x) for iv in intervals)}


interval_strategy = st.tuples(
    st.integers(min_value=-20, max_value=20), st.integers(min_value=0, max_value=15)
).map(lambda p: TimeInterval(p[0], min(p[0] + p[1], 20)))


# --- temporal semantic operation ---------------------------------------


def test_tso_before_worked_example():
    assert tso("before", TimeInterval(2008, 2008)) == TimeInterval(NEG_INF, 2008)


def test_tso_during_worked_example():
    assert tso("during", TimeInterval(1964, 1968)) == TimeInterval(1964, 1968)


def test_tso_after_mirrors_before():
    assert tso("after", TimeInterval(1945, 1945)) == TimeInterval(1945, POS_INF)


@pytest.mark.parametrize(
    "word,expected",
    [
        ("prior to", (NEG_INF, 3)),
        ("since", (3, POS_INF)),
        ("until", (NEG_INF, 9)),
        ("while", (3, 9)),
        ("between", (3, 9)),
        ("when", (3, 9)),
    ],
)
def test_tso_word_table(word, expected):
    assert tso(word, TimeInterval(3, 9)) == TimeInterval(*expected)


def test_tso_unknown_word_is_config_error():
    with pytest.raises(ConfigError):
        tso("whenever", TimeInterval(1, 2))


def test_signal_words_partition():
    assert len(SIGNAL_WORDS) == 18
    assert set(TSO_RULES).isdisjoint(ALLEN_SIGNAL_WORDS)
    for word, kind in ALLEN_SIGNAL_WORDS.items():
        assert kind in RELATIONS_BY_KIND


def test_every_dictionary_semantic_maps_to_a_signal_word():
    for rel in ALLEN_DICTIONARY.values():
        assert signal_word_for_semantic(rel.semantic) in SIGNAL_WORDS


# --- set operations ------------------------------------------------------


def test_union_merges_shared_endpoint():
    result = union([TimeInterval(2001, 2009), TimeInterval(2009, 2017)])
    assert result.intervals == (TimeInterval(2001, 2017),)
    assert result.total_duration() == 16


def test_union_keeps_disjoint_apart():
    result = union([TimeInterval(1, 2), TimeInterval(5, 6)])
    assert result.intervals == (TimeInterval(1, 2), TimeInterval(5, 6))
    assert coverage(result) == brute_union([TimeInterval(1, 2), TimeInterval(5, 6)])


def test_union_singleton_identity():
    assert union([TimeInterval(3, 8)]).intervals == (TimeInterval(3, 8),)


def test_union_merges_abutting_integers():
    assert union([TimeInterval(1, 2), TimeInterval(3, 4)]).intervals == (TimeInterval(1, 4),)


def test_intersection_worked_example():
    result = intersection([TimeInterval(1964, 1968), TimeInterval(1967, 1971)])
    assert result.intervals == (TimeInterval(1967, 1968),)


def test_intersection_disjoint_is_empty():
    assert intersection([TimeInterval(1, 2), TimeInterval(5, 6)]).is_empty()


def test_intersection_identity():
    assert intersection([TimeInterval(1, 5), TimeInterval(1, 5)]).intervals == (
        TimeInterval(1, 5),
    )


def test_negation_spot_value():
    result = negation(union([TimeInterval(5, 10)]))
    assert result.intervals == (TimeInterval(NEG_INF, 4), TimeInterval(11, POS_INF))


def test_negation_of_empty_is_universe():
    assert negation(IntervalSet.empty()) == IntervalSet.universe()


def test_negation_of_universe_is_empty():
    assert negation(IntervalSet.universe()).is_empty()


@settings(max_examples=300, deadline=None)
@given(st.lists(interval_strategy, min_size=1, max_size=3))
def test_union_matches_brute_force(intervals):
    assert coverage(union(intervals)) == brute_union(intervals)


@settings(max_examples=300, deadline=None)
@given(st.lists(interval_strategy, min_size=1, max_size=3))
def test_intersection_matches_brute_force(intervals):
    assert coverage(intersection(intervals)) == brute_intersection(intervals)


@settings(max_examples=300, deadline=None)
@given(st.lists(interval_strategy, min_size=1, max_size=3))
def test_negation_matches_brute_force(intervals):
    combined = union(intervals)
    complement = negation(combined)
    expected = set(GRID) - coverage(combined)
    assert coverage(complement) == expected
    assert negation(complement) == combined


@settings(max_examples=200, deadline=None)
@given(
    st.lists(interval_strategy, min_size=1, max_size=2),
    st.lists(interval_strategy, min_size=1, max_size=2),
)
def test_de_morgan_on_sets(left, right):
    a, b = union(left), union(right)
    assert negation(a.union_with(b)) == negation(a).intersect_with(negation(b))


@settings(max_examples=200, deadline=None)
@given(st.lists(interval_strategy, min_size=1, max_size=3))
def test_canonical_form_is_stable(intervals):
    once = union(intervals)
    assert IntervalSet.from_intervals(once.intervals) == once
    for first, second in zip(once.intervals, once.intervals[1:]):
        assert first.end + 1 < second.start


# --- durations -----------------------------------------------------------


def test_duration_values():
    assert duration(TimeInterval(2001, 2017)) == 16
    assert duration(TimeInterval(7, 7)) == 0
    assert duration(TimeInterval(NEG_INF, 2008)) == POS_INF


def test_union_duration_sums_disjoint_members():
    parts = [TimeInterval(1, 2), TimeInterval(5, 6), TimeInterval(10, 14)]
    assert union(parts).total_duration() == sum(duration(p) for p in parts)


@settings(max_examples=200, deadline=None)
@given(
    st.lists(interval_strategy, min_size=2, max_size=3),
)
def test_intersection_duration_bounded_by_min(intervals):
    result = intersection(intervals)
    assert result.total_duration() <= min(duration(iv) for iv in intervals)


@pytest.mark.parametrize(
    "a,b,sign,magnitude",
    [
        ((1964, 1968), (1967, 1971), 0, 0),
        ((2001, 2009), (2009, 2017), 0, 0),
        ((1, 5), (1, 2), 1, 3),
    ],
)
def test_compare_duration_spot_values(a, b, sign, magnitude):
    delta = compare_duration(TimeInterval(*a), TimeInterval(*b))
    assert delta == DurationDelta(sign=sign, magnitude=magnitude)


def test_compare_duration_with_open_ends():
    open_iv = TimeInterval(0, POS_INF)
    finite = TimeInterval(0, 10)
    assert compare_duration(open_iv, finite) == DurationDelta(sign=1, magnitude=POS_INF)
    assert compare_duration(finite, open_iv) == DurationDelta(sign=-1, magnitude=POS_INF)
    both = compare_duration(open_iv, TimeInterval(NEG_INF, 4))
    assert both.sign == 0 and both.indeterminate


# --- ranking -------------------------------------------------------------


def facts_with_intervals(spans):
    rows = [(f"S{i}", "r", f"O{i}", s, e) for i, (s, e) in enumerate(spans)]
    return make_kg(rows).facts


def test_rank_facts_by_start():
    facts = facts_with_intervals([(1967, 1971), (1964, 1968), (2001, 2009)])
    ranked = rank_facts(facts, key="start", order="asc")
    assert [(f.interval.start, ordinal) for f, ordinal in ranked] == [
        (1964, 1),
        (1967, 2),
        (2001, 3),
    ]


def test_rank_facts_competition_ties():
    facts = facts_with_intervals([(5, 9), (5, 7), (8, 9)])
    ranked = rank_facts(facts, key="start", order="asc")
    assert [ordinal for _, ordinal in ranked] == [1, 1, 3]
    assert [f.id for f, _ in ranked] == [0, 1, 2]


def test_rank_facts_duration_ties():
    facts = facts_with_intervals([(0, 4), (10, 14), (20, 28)])
    ranked = rank_facts(facts, key="duration", order="asc")
    assert [ordinal for _, ordinal in ranked] == [1, 1, 3]


def test_rank_facts_desc_reverses_order():
    facts = facts_with_intervals([(1, 3), (4, 9), (10, 20)])
    asc = rank_facts(facts, key="end", order="asc")
    desc = rank_facts(facts, key="end", order="desc")
    assert [f.id for f, _ in asc] == [f.id for f, _ in desc][::-1]
    assert [o for _, o in asc] == [o for _, o in desc]


def test_rank_facts_is_a_permutation():
    facts = facts_with_intervals([(3, 5), (3, 5), (1, 2), (9, 9)])
    ranked = rank_facts(facts, key="start", order="asc")
    assert sorted(f.id for f, _ in ranked) == [0, 1, 2, 3]


def test_rank_facts_needs_two():
    facts = facts_with_intervals([(1, 2)])
    with pytest.raises(DomainError):
        rank_facts(facts, key="start", order="asc")


def test_rank_facts_rejects_unknown_key():
    facts = facts_with_intervals([(1, 2), (3, 4)])
    with pytest.raises(ConfigError):
        rank_facts(facts, key="middle", order="asc")

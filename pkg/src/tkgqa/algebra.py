"""Timeline arithmetic: signal-word constraints, interval-set operations,
durations, and temporal ranking of facts.

All operations are pure functions over immutable values.  Interval sets
are kept canonical: members sorted by start, pairwise disjoint, and
separated by at least one granularity unit (abutting members merge).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ConfigError, DomainError
from .kg import Fact
from .timeline import NEG_INF, POS_INF, TimeInterval, Timestamp, cmp_ts, is_finite

# Signal words with a constraint rule: word + time range => derived range.
TSO_RULES = {
    "before": lambda t: TimeInterval(NEG_INF, t.start),
    "prior to": lambda t: TimeInterval(NEG_INF, t.start),
    "after": lambda t: TimeInterval(t.end, POS_INF),
    "since": lambda t: TimeInterval(t.start, POS_INF),
    "until": lambda t: TimeInterval(NEG_INF, t.end),
    "during": lambda t: TimeInterval(t.start, t.end),
    "while": lambda t: TimeInterval(t.start, t.end),
    "between": lambda t: TimeInterval(t.start, t.end),
    "when": lambda t: TimeInterval(t.start, t.end),
}

# Signal words naming a relation kind instead of a constraint rule.
ALLEN_SIGNAL_WORDS = {
    "meets": "meets",
    "met-by": "met-by",
    "starts": "starts",
    "started-by": "started-by",
    "finishes": "finishes",
    "finished-by": "finished-by",
    "overlaps": "overlaps",
    "overlapped-by": "overlapped-by",
    "equal": "equals",
}

SIGNAL_WORDS = tuple(TSO_RULES) + tuple(ALLEN_SIGNAL_WORDS)

# Dictionary semantics spelled as signal words.
SEMANTIC_TO_SIGNAL = {
    "finishedby": "finished-by",
    "startedby": "started-by",
    "metby": "met-by",
}


def signal_word_for_semantic(semantic: str) -> str:
    word = SEMANTIC_TO_SIGNAL.get(semantic, semantic)
    if word not in SIGNAL_WORDS:
        raise ConfigError(f"semantic {semantic!r} has no signal word")
    return word


def tso(word: str, t: TimeInterval) -> TimeInterval:
    """Derive the constraint range for a signal word, e.g. before + [a, b]
    gives (-inf, a]."""
    rule = TSO_RULES.get(word)
    if rule is None:
        raise ConfigError(f"no constraint rule for signal word {word!r}")
    return rule(t)


@dataclass(frozen=True)
class IntervalSet:
    """Canonical union of closed intervals; construct via from_intervals."""

    intervals: tuple[TimeInterval, ...]

    @staticmethod
    def from_intervals(items: Iterable[TimeInterval]) -> "IntervalSet":
        pending = sorted(items, key=lambda iv: (iv.start, iv.end))
        merged: list[TimeInterval] = []
        for iv in pending:
            if merged and cmp_ts(iv.start, _next_value(merged[-1].end)) <= 0:
                last = merged[-1]
                if cmp_ts(iv.end, last.end) > 0:
                    merged[-1] = TimeInterval(last.start, iv.end)
            else:
                merged.append(iv)
        return IntervalSet(tuple(merged))

    @staticmethod
    def empty() -> "IntervalSet":
        return IntervalSet(())

    @staticmethod
    def universe() -> "IntervalSet":
        return IntervalSet((TimeInterval(NEG_INF, POS_INF),))

    def is_empty(self) -> bool:
        return not self.intervals

    def contains_value(self, value: Timestamp) -> bool:
        return any(iv.contains_value(value) for iv in self.intervals)

    def union_with(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet.from_intervals(self.intervals + other.intervals)

    def intersect_with(self, other: "IntervalSet") -> "IntervalSet":
        pieces = []
        for a in self.intervals:
            for b in other.intervals:
                start = max(a.start, b.start)
                end = min(a.end, b.end)
                if cmp_ts(start, end) <= 0 and not (start == end and not is_finite(start)):
                    pieces.append(TimeInterval(start, end))
        return IntervalSet.from_intervals(pieces)

    def complement(self) -> "IntervalSet":
        pieces = []
        cursor = NEG_INF
        for iv in self.intervals:
            if cmp_ts(cursor, iv.start) < 0:
                # iv.start is finite here: a start can only be -inf (not <)
                # or finite, since (inf, inf) intervals are unrepresentable.
                pieces.append(TimeInterval(cursor, iv.start - 1))
            cursor = _next_value(iv.end)
            if cursor == POS_INF and iv.end == POS_INF:
                return IntervalSet.from_intervals(pieces)
        pieces.append(TimeInterval(cursor, POS_INF))
        return IntervalSet.from_intervals(pieces)

    def total_duration(self) -> int | float:
        return sum(duration(iv) for iv in self.intervals) if self.intervals else 0

    def render(self, granularity: str) -> str:
        if not self.intervals:
            return "never"
        return " and ".join(iv.render(granularity) for iv in self.intervals)


def _next_value(ts: Timestamp) -> Timestamp:
    return ts + 1 if is_finite(ts) else ts


def union(xs: Sequence[TimeInterval]) -> IntervalSet:
    """Canonical coverage of any input interval; abutting inputs merge."""
    if not xs:
        return IntervalSet.empty()
    return IntervalSet.from_intervals(xs)


def intersection(xs: Sequence[TimeInterval]) -> IntervalSet:
    """Points common to all inputs; possibly empty."""
    if not xs:
        return IntervalSet.empty()
    result = IntervalSet.from_intervals(xs[:1])
    for iv in xs[1:]:
        result = result.intersect_with(IntervalSet.from_intervals([iv]))
    return result


def negation(x: IntervalSet) -> IntervalSet:
    """Complement within the full timeline; an involution."""
    return x.complement()


def duration(x: TimeInterval) -> int | float:
    """Length end - start in granularity units; inf when open-ended."""
    if not (is_finite(x.start) and is_finite(x.end)):
        return POS_INF
    return x.end - x.start


@dataclass(frozen=True)
class DurationDelta:
    """Signed comparison of two durations.  magnitude is inf when exactly
    one side is open-ended, and indeterminate is set when both are."""

    sign: int
    magnitude: int | float
    indeterminate: bool = False


def compare_duration(a: TimeInterval, b: TimeInterval) -> DurationDelta:
    da, db = duration(a), duration(b)
    if da == POS_INF and db == POS_INF:
        return DurationDelta(sign=0, magnitude=0, indeterminate=True)
    sign = cmp_ts(da, db)
    magnitude = abs(da - db)
    return DurationDelta(sign=sign, magnitude=magnitude)


_RANK_KEYS = {
    "start": lambda fact: fact.interval.start,
    "end": lambda fact: fact.interval.end,
    "duration": lambda fact: duration(fact.interval),
}


def rank_facts(
    facts: Sequence[Fact], key: str = "start", order: str = "asc"
) -> list[tuple[Fact, int]]:
    """Order facts by a temporal key with competition ranking.

    Ties share an ordinal and displace the following one (1, 1, 3);
    fact id breaks ties in the output order only.
    """
    if len(facts) < 2:
        raise DomainError("ranking needs at least two facts")
    if key not in _RANK_KEYS:
        raise ConfigError(f"unknown ranking key {key!r}")
    if order not in ("asc", "desc"):
        raise ConfigError(f"unknown ranking order {order!r}")
    key_fn = _RANK_KEYS[key]
    for fact in facts:
        if not isinstance(fact.interval, TimeInterval):
            raise DomainError(f"fact {fact.id} is not unified")
    reverse = order == "desc"
    ordered = sorted(facts, key=lambda f: f.id)
    ordered.sort(key=key_fn, reverse=reverse)
    ranked: list[tuple[Fact, int]] = []
    for position, fact in enumerate(ordered):
        if position > 0 and key_fn(fact) == key_fn(ordered[position - 1]):
            ordinal = ranked[position - 1][1]
        else:
            ordinal = position + 1
        ranked.append((fact, ordinal))
    return ranked

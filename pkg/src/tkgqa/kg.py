"""Fact files, temporal knowledge graphs, and fact verbalization.

A fact file is delimiter-separated text with five columns
(subject, predicate, object, start, end), '|' or tab delimited, with an
optional header line.  Parsing assigns fact ids in row order and
deduplicates entity and relation surface names into id tables.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable

from .errors import DomainError, FactFileError, IntervalError
from .timeline import (
    NEG_INF,
    POS_INF,
    FULL_TIMELINE,
    TimeInterval,
    Timestamp,
    check_granularity,
    format_timestamp,
    parse_timestamp,
)

HEADER_FIELDS = ("subject", "predicate", "object", "start", "end")


@dataclass(frozen=True)
class Fact:
    """One quintuple of the graph.  `interval` may be None (no time columns)
    or a raw (start, end) pair until unify() normalizes it."""

    id: int
    subject: int
    predicate: int
    object: int
    interval: TimeInterval | tuple[Timestamp, Timestamp] | None
    has_time: bool = True


@dataclass(frozen=True)
class TemporalKG:
    facts: tuple[Fact, ...]
    entity_names: tuple[str, ...]
    relation_names: tuple[str, ...]
    entity_index: dict[int, tuple[int, ...]]
    granularity: str

    def entity_name(self, entity_id: int) -> str:
        return self.entity_names[entity_id]

    def relation_name(self, relation_id: int) -> str:
        return self.relation_names[relation_id]

    def entity_id(self, name: str) -> int:
        try:
            return self.entity_names.index(name)
        except ValueError:
            raise KeyError(name) from None


def _detect_delimiter(first_line: str, line_no: int) -> str:
    if len(first_line.split("\t")) == 5:
        return "\t"
    if len(first_line.split("|")) == 5:
        return "|"
    raise FactFileError(
        "cannot detect delimiter: first line does not split into 5 fields with tab or '|'",
        line=line_no,
    )


def _is_header(fields: list[str]) -> bool:
    return tuple(f.strip().lower() for f in fields) == HEADER_FIELDS


def _build_index(facts: Iterable[Fact]) -> dict[int, tuple[int, ...]]:
    index: dict[int, list[int]] = {}
    for fact in facts:
        index.setdefault(fact.subject, []).append(fact.id)
        if fact.object != fact.subject:
            index.setdefault(fact.object, []).append(fact.id)
    return {eid: tuple(ids) for eid, ids in index.items()}


def parse_facts(path: str | Path, granularity: str) -> TemporalKG:
    """Read a fact file into a TemporalKG with fact ids in row order.

    Blank time fields become open ends (both blank marks the fact as
    untimed, pending unify).  Raises FactFileError with the offending
    line number on malformed rows or unparseable dates.
    """
    check_granularity(granularity)
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    entity_ids: dict[str, int] = {}
    relation_ids: dict[str, int] = {}
    facts: list[Fact] = []

    def intern(table: dict[str, int], name: str) -> int:
        if name not in table:
            table[name] = len(table)
        return table[name]

    delimiter = None
    first_row = True
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if delimiter is None:
            delimiter = _detect_delimiter(line, line_no)
        fields = line.split(delimiter)
        if len(fields) != 5:
            raise FactFileError(
                f"expected 5 fields, got {len(fields)}", line=line_no
            )
        if first_row:
            first_row = False
            if _is_header(fields):
                continue
        subject, predicate, obj, start_text, end_text = (f.strip() for f in fields)
        start_blank, end_blank = start_text == "", end_text == ""
        if start_blank and end_blank:
            interval, has_time = None, False
        else:
            start = NEG_INF if start_blank else parse_timestamp(start_text, granularity, line=line_no)
            end = POS_INF if end_blank else parse_timestamp(end_text, granularity, line=line_no)
            try:
                interval = TimeInterval(start, end)
            except IntervalError as exc:
                raise FactFileError(str(exc), line=line_no) from exc
            has_time = not (start == NEG_INF and end == POS_INF)
        facts.append(
            Fact(
                id=len(facts),
                subject=intern(entity_ids, subject),
                predicate=intern(relation_ids, predicate),
                object=intern(entity_ids, obj),
                interval=interval,
                has_time=has_time,
            )
        )

    return TemporalKG(
        facts=tuple(facts),
        entity_names=tuple(entity_ids),
        relation_names=tuple(relation_ids),
        entity_index=_build_index(facts),
        granularity=granularity,
    )


def unify(kg: TemporalKG) -> TemporalKG:
    """Normalize every fact onto the timeline; idempotent.

    Facts without temporal information get the full open interval and
    has_time False.  Raw (start, end) pairs are promoted to TimeInterval;
    an inverted pair raises IntervalError naming the fact id.
    """
    facts = []
    for fact in kg.facts:
        interval = fact.interval
        if interval is None:
            interval = FULL_TIMELINE
        elif isinstance(interval, tuple):
            try:
                interval = TimeInterval(*interval)
            except IntervalError as exc:
                raise IntervalError(f"fact {fact.id}: {exc}") from exc
        has_time = not (interval.start == NEG_INF and interval.end == POS_INF)
        facts.append(replace(fact, interval=interval, has_time=has_time))
    return TemporalKG(
        facts=tuple(facts),
        entity_names=kg.entity_names,
        relation_names=kg.relation_names,
        entity_index=_build_index(facts),
        granularity=kg.granularity,
    )


def verbalize(fact: Fact, kg: TemporalKG) -> str:
    """Render a unified fact as
    `<subject> <predicate> <object> from <start> to <end>`."""
    if not isinstance(fact.interval, TimeInterval):
        raise DomainError(f"fact {fact.id} is not unified")
    return (
        f"{kg.entity_name(fact.subject)} "
        f"{kg.relation_name(fact.predicate)} "
        f"{kg.entity_name(fact.object)} "
        f"from {format_timestamp(fact.interval.start, kg.granularity)} "
        f"to {format_timestamp(fact.interval.end, kg.granularity)}"
    )


def entity_frequency(kg: TemporalKG) -> Counter:
    """Occurrence count per entity id over both subject and object slots."""
    counts: Counter = Counter()
    for fact in kg.facts:
        counts[fact.subject] += 1
        counts[fact.object] += 1
    return counts


def serialize_facts(kg: TemporalKG) -> str:
    """Canonical byte-stable text form; parse_facts inverts it exactly."""
    lines = ["|".join(HEADER_FIELDS)]
    for fact in kg.facts:
        if fact.interval is None:
            start_text = end_text = ""
        else:
            interval = fact.interval if isinstance(fact.interval, TimeInterval) else TimeInterval(*fact.interval)
            start_text = format_timestamp(interval.start, kg.granularity)
            end_text = format_timestamp(interval.end, kg.granularity)
        lines.append(
            "|".join(
                (
                    kg.entity_name(fact.subject),
                    kg.relation_name(fact.predicate),
                    kg.entity_name(fact.object),
                    start_text,
                    end_text,
                )
            )
        )
    return "\n".join(lines) + "\n"

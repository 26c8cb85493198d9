"""Integer timeline primitives: granularities, timestamps, closed intervals.

Finite timestamps are plain ints counting granularity units since a fixed
epoch (1970-01-01 for sub-year units, year 0 for the year unit).  The two
float infinities serve as open-end sentinels and order correctly against
any int.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date

from .errors import FactFileError, IntervalError

NEG_INF = float("-inf")
POS_INF = float("inf")

Timestamp = int | float

GRANULARITIES = ("minute", "hour", "day", "week", "month", "year")

NEG_INF_TEXT = "beginning of time"
POS_INF_TEXT = "end of time"

_NEG_SPELLINGS = frozenset({NEG_INF_TEXT, "-inf"})
_POS_SPELLINGS = frozenset({POS_INF_TEXT, "+inf"})

_EPOCH_ORDINAL = date(1970, 1, 1).toordinal()

_DATE_RE = re.compile(
    r"^(?P<year>-?\d{1,6})"
    r"(?:-(?P<month>\d{1,2})"
    r"(?:-(?P<day>\d{1,2})"
    r"(?:[T ](?P<hour>\d{1,2})(?::(?P<minute>\d{1,2}))?)?)?)?$"
)

_MINUTES_PER_DAY = 24 * 60


def is_finite(ts: Timestamp) -> bool:
    return ts == ts and NEG_INF < ts < POS_INF


def cmp_ts(a: Timestamp, b: Timestamp) -> int:
    """Three-way compare; sentinels are ordered extremes (inf == inf)."""
    return (a > b) - (a < b)


def check_granularity(granularity: str) -> str:
    if granularity not in GRANULARITIES:
        raise FactFileError(
            f"unknown granularity {granularity!r}; expected one of {', '.join(GRANULARITIES)}"
        )
    return granularity


def parse_timestamp(text: str, granularity: str, line: int | None = None) -> Timestamp:
    """Parse a date string to a unit count at the given granularity.

    Accepts ISO-8601 prefixes (YYYY, YYYY-MM, YYYY-MM-DD, optionally
    Thh:mm), bare integers as years, and the open-end spellings
    "beginning of time" / "end of time" / "-inf" / "+inf".  Missing
    calendar components extend to the first unit (month 1, day 1, 00:00).
    """
    text = text.strip()
    if text in _NEG_SPELLINGS:
        return NEG_INF
    if text in _POS_SPELLINGS:
        return POS_INF
    m = _DATE_RE.match(text)
    if m is None:
        raise FactFileError(f"unparseable date {text!r}", line=line)
    year = int(m.group("year"))
    month = int(m.group("month") or 1)
    day = int(m.group("day") or 1)
    hour = int(m.group("hour") or 0)
    minute = int(m.group("minute") or 0)
    if not (1 <= month <= 12):
        raise FactFileError(f"month out of range in {text!r}", line=line)
    if granularity == "year":
        return year
    if granularity == "month":
        return (year - 1970) * 12 + (month - 1)
    try:
        days = date(year, month, day).toordinal() - _EPOCH_ORDINAL
    except ValueError as exc:
        raise FactFileError(f"invalid calendar date {text!r}: {exc}", line=line) from exc
    if hour > 23 or minute > 59:
        raise FactFileError(f"time of day out of range in {text!r}", line=line)
    if granularity == "week":
        return days // 7
    if granularity == "day":
        return days
    if granularity == "hour":
        return days * 24 + hour
    return days * _MINUTES_PER_DAY + hour * 60 + minute


def format_timestamp(value: Timestamp, granularity: str) -> str:
    """Render a unit count as canonical text; inverse of parse_timestamp."""
    if value == NEG_INF:
        return NEG_INF_TEXT
    if value == POS_INF:
        return POS_INF_TEXT
    value = int(value)
    if granularity == "year":
        return str(value)
    if granularity == "month":
        year, month = 1970 + value // 12, value % 12 + 1
        return f"{year:04d}-{month:02d}"
    if granularity == "week":
        return date.fromordinal(value * 7 + _EPOCH_ORDINAL).isoformat()
    if granularity == "day":
        return date.fromordinal(value + _EPOCH_ORDINAL).isoformat()
    if granularity == "hour":
        days, hour = divmod(value, 24)
        return f"{date.fromordinal(days + _EPOCH_ORDINAL).isoformat()}T{hour:02d}:00"
    days, rest = divmod(value, _MINUTES_PER_DAY)
    hour, minute = divmod(rest, 60)
    return f"{date.fromordinal(days + _EPOCH_ORDINAL).isoformat()}T{hour:02d}:{minute:02d}"


@dataclass(frozen=True)
class TimeInterval:
    """Closed interval [start, end]; a point iff start == end and finite."""

    start: Timestamp
    end: Timestamp

    def __post_init__(self):
        if cmp_ts(self.start, self.end) > 0:
            raise IntervalError(f"interval start {self.start} is after end {self.end}")
        if self.start == self.end and not is_finite(self.start):
            raise IntervalError("zero-length interval at an open end is not representable")

    def is_point(self) -> bool:
        return self.start == self.end and is_finite(self.start)

    def overlaps(self, other: "TimeInterval") -> bool:
        return cmp_ts(self.start, other.end) <= 0 and cmp_ts(other.start, self.end) <= 0

    def contains_value(self, value: Timestamp) -> bool:
        return cmp_ts(self.start, value) <= 0 and cmp_ts(value, self.end) <= 0

    def midpoint(self) -> float | None:
        """Midpoint for proximity math; the finite endpoint if one side is
        open, None if both are."""
        s_fin, e_fin = is_finite(self.start), is_finite(self.end)
        if s_fin and e_fin:
            return (self.start + self.end) / 2
        if s_fin:
            return float(self.start)
        if e_fin:
            return float(self.end)
        return None

    def render(self, granularity: str) -> str:
        return f"{format_timestamp(self.start, granularity)} to {format_timestamp(self.end, granularity)}"


FULL_TIMELINE = TimeInterval(NEG_INF, POS_INF)

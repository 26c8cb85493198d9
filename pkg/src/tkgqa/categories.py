"""Question categorisation: level, answer focus, capabilities, answer types.

The level follows the number of context facts (1 simple, 2 medium,
3 complex); each level splits by whether the answer is factual (an
entity) or temporal (a time, duration, or temporal relationship).  Every
(level, focus) category demands a fixed set of retrieval/reasoning
capabilities.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import DomainError


class Level(str, enum.Enum):
    SIMPLE = "simple"
    MEDIUM = "medium"
    COMPLEX = "complex"

    @property
    def arity(self) -> int:
        return {"simple": 1, "medium": 2, "complex": 3}[self.value]

    @staticmethod
    def for_size(size: int) -> "Level":
        try:
            return {1: Level.SIMPLE, 2: Level.MEDIUM, 3: Level.COMPLEX}[size]
        except KeyError:
            raise DomainError(f"no level for context size {size}") from None


class Focus(str, enum.Enum):
    FACTUAL = "factual"
    TEMPORAL = "temporal"


class Capability(str, enum.Enum):
    TCR = "TCR"  # temporal constrained retrieval
    TPR = "TPR"  # timeline position retrieval
    TSO = "TSO"  # temporal semantic operation
    TAO = "TAO"  # timeline arithmetic operation


class AnswerType(str, enum.Enum):
    SUBJECT = "subject"
    OBJECT = "object"
    TIMESTAMP_START = "timestamp_start"
    TIMESTAMP_END = "timestamp_end"
    TIMESTAMP_RANGE = "timestamp_range"
    DURATION = "duration"
    RELATION_DURATION = "relation_duration"
    RELATION_RANKING = "relation_ranking"
    RELATION_UNION_OR_INTERSECTION = "relation_union_or_intersection"


class AnswerFormat(str, enum.Enum):
    OPEN = "open"
    YES_NO = "yes_no"
    MULTIPLE_CHOICE = "multiple_choice"


@dataclass(frozen=True)
class QuestionCategory:
    level: Level
    focus: Focus

    def __str__(self) -> str:
        return f"{self.level.value}.{self.focus.value}"


_CAPABILITIES = {
    (Level.SIMPLE, Focus.FACTUAL): frozenset({Capability.TCR}),
    (Level.SIMPLE, Focus.TEMPORAL): frozenset({Capability.TPR}),
    (Level.MEDIUM, Focus.FACTUAL): frozenset({Capability.TPR, Capability.TSO, Capability.TCR}),
    (Level.MEDIUM, Focus.TEMPORAL): frozenset({Capability.TPR, Capability.TAO}),
    (Level.COMPLEX, Focus.FACTUAL): frozenset(
        {Capability.TPR, Capability.TCR, Capability.TSO, Capability.TAO}
    ),
    (Level.COMPLEX, Focus.TEMPORAL): frozenset({Capability.TPR, Capability.TAO}),
}


def capabilities_for(category: QuestionCategory) -> frozenset[Capability]:
    """The fixed capability set demanded by a category."""
    return _CAPABILITIES[(category.level, category.focus)]


ALL_CATEGORIES = tuple(QuestionCategory(level, focus) for level, focus in _CAPABILITIES)

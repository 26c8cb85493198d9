"""Question templates: a data-driven bank keyed by category, answer type,
and answer format.

Each template carries a `pattern` with named slots and an `op` that tells
the generator how to compute the answer.  Slots for the first context
fact are {subject}, {predicate}, {object}, {t_start}, {t_end}; the second
and third facts use the same names suffixed with 2 and 3.  {signal} and
{signal2} hold relation words computed between the facts, {ordinal} an
ordinal word, {choice_list} the rendered options of a multiple-choice
question, and {unit}/{units} the granularity word.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .categories import AnswerFormat, AnswerType, Focus, Level, QuestionCategory
from .errors import ConfigError

_SLOT_RE = re.compile(r"\{([a-z_0-9]+)\}")

_FACT_SLOTS = ("subject", "predicate", "object", "t_start", "t_end")
_TIME_SLOTS = {"t_start", "t_end", "t_start2", "t_end2", "t_start3", "t_end3"}
_FREE_SLOTS = {"unit", "units", "ordinal", "choice_list", "signal", "signal2"}

# Operations grouped by the kind of temporal relation they exercise; the
# generator picks a group first and then a template within it.
OP_GROUPS = {
    "subject": "entity",
    "object": "entity",
    "t_start": "position",
    "t_end": "position",
    "t_range": "position",
    "duration": "position",
    "union_range": "setop",
    "union_duration": "setop",
    "intersection_range": "setop",
    "negation_range": "setop",
    "union_range_mc": "setop",
    "intersection_range_mc": "setop",
    "union_duration_mc": "setop",
    "allen_probe": "allen",
    "intersect_nonempty": "allen",
    "before_all": "allen",
    "any_pair_intersect": "allen",
    "allen_word_mc": "allen",
    "duration_diff": "duration",
    "duration_max": "duration",
    "duration_min": "duration",
    "duration_spread": "duration",
    "duration_compare": "duration",
    "duration_longest_is_first": "duration",
    "duration_shortest_is_first": "duration",
    "duration_all_equal": "duration",
    "duration_diff_mc": "duration",
    "duration_max_mc": "duration",
    "duration_min_mc": "duration",
    "duration_spread_mc": "duration",
    "rank_entity": "ranking",
    "rank_entity_mc": "ranking",
}

_ANSWER_TYPE_OPS = {
    AnswerType.SUBJECT: {"subject"},
    AnswerType.OBJECT: {"object"},
    AnswerType.TIMESTAMP_START: {"t_start"},
    AnswerType.TIMESTAMP_END: {"t_end"},
    AnswerType.TIMESTAMP_RANGE: {"t_range"},
    AnswerType.DURATION: {"duration"},
    AnswerType.RELATION_UNION_OR_INTERSECTION: {
        op for op, group in OP_GROUPS.items() if group in ("setop", "allen")
    },
    AnswerType.RELATION_DURATION: {
        op for op, group in OP_GROUPS.items() if group == "duration"
    },
    AnswerType.RELATION_RANKING: {"rank_entity", "rank_entity_mc"},
}

LEGAL_ANSWER_TYPES = {
    QuestionCategory(Level.SIMPLE, Focus.FACTUAL): (AnswerType.SUBJECT, AnswerType.OBJECT),
    QuestionCategory(Level.SIMPLE, Focus.TEMPORAL): (
        AnswerType.TIMESTAMP_START,
        AnswerType.TIMESTAMP_END,
        AnswerType.TIMESTAMP_RANGE,
        AnswerType.DURATION,
    ),
    QuestionCategory(Level.MEDIUM, Focus.FACTUAL): (AnswerType.SUBJECT, AnswerType.OBJECT),
    QuestionCategory(Level.MEDIUM, Focus.TEMPORAL): (
        AnswerType.RELATION_UNION_OR_INTERSECTION,
        AnswerType.RELATION_DURATION,
    ),
    QuestionCategory(Level.COMPLEX, Focus.FACTUAL): (AnswerType.SUBJECT, AnswerType.OBJECT),
    QuestionCategory(Level.COMPLEX, Focus.TEMPORAL): (
        AnswerType.RELATION_UNION_OR_INTERSECTION,
        AnswerType.RELATION_DURATION,
        AnswerType.RELATION_RANKING,
    ),
}


@dataclass(frozen=True)
class Template:
    id: str
    category: QuestionCategory
    answer_type: AnswerType
    answer_format: AnswerFormat
    pattern: str
    op: str
    probe: str | None = None
    rank_key: str | None = None
    rank_order: str = "asc"
    signals: tuple[str, ...] = ()
    requires_negation: bool = False

    @property
    def group(self) -> str:
        return OP_GROUPS[self.op]

    def slots(self) -> set[str]:
        return set(_SLOT_RE.findall(self.pattern))


def _allowed_slots(level: Level) -> set[str]:
    allowed = set(_FREE_SLOTS)
    for index in range(1, level.arity + 1):
        suffix = "" if index == 1 else str(index)
        allowed.update(name + suffix for name in _FACT_SLOTS)
    return allowed


def validate_template(template: Template) -> None:
    category = template.category
    if template.answer_type not in LEGAL_ANSWER_TYPES[category]:
        raise ConfigError(
            f"template {template.id}: answer type {template.answer_type.value} "
            f"is not legal for {category}"
        )
    if template.op not in OP_GROUPS:
        raise ConfigError(f"template {template.id}: unknown op {template.op!r}")
    if template.op not in _ANSWER_TYPE_OPS[template.answer_type]:
        raise ConfigError(
            f"template {template.id}: op {template.op!r} cannot produce "
            f"{template.answer_type.value} answers"
        )
    slots = template.slots()
    unknown = slots - _allowed_slots(category.level)
    if unknown:
        raise ConfigError(
            f"template {template.id}: slots {sorted(unknown)} not fillable at level "
            f"{category.level.value}"
        )
    if template.op == "subject" and "subject" in slots:
        raise ConfigError(f"template {template.id}: pattern leaks the subject answer")
    if template.op == "object" and "object" in slots:
        raise ConfigError(f"template {template.id}: pattern leaks the object answer")
    if category.focus is Focus.TEMPORAL and slots & _TIME_SLOTS:
        raise ConfigError(
            f"template {template.id}: temporal questions must not state the times"
        )
    if category.level is not Level.SIMPLE and slots & _TIME_SLOTS:
        raise ConfigError(
            f"template {template.id}: only simple questions may state a time constraint"
        )
    if template.answer_format is AnswerFormat.MULTIPLE_CHOICE and "choice_list" not in slots:
        raise ConfigError(f"template {template.id}: multiple choice needs {{choice_list}}")
    if template.answer_format is not AnswerFormat.MULTIPLE_CHOICE and "choice_list" in slots:
        raise ConfigError(f"template {template.id}: {{choice_list}} outside multiple choice")
    if template.op == "allen_probe" and template.probe not in ("before", "after"):
        raise ConfigError(f"template {template.id}: allen_probe needs probe before/after")
    if template.op == "duration_compare" and template.probe not in ("longer", "shorter", "equal"):
        raise ConfigError(f"template {template.id}: bad duration_compare probe")
    if template.op.startswith("rank_entity"):
        if template.rank_key not in ("start", "end", "duration"):
            raise ConfigError(f"template {template.id}: ranking needs a key")
        if "ordinal" not in slots:
            raise ConfigError(f"template {template.id}: ranking needs {{ordinal}}")


def template_from_record(record: dict) -> Template:
    try:
        template = Template(
            id=record["id"],
            category=QuestionCategory(Level(record["level"]), Focus(record["focus"])),
            answer_type=AnswerType(record["answer_type"]),
            answer_format=AnswerFormat(record["answer_format"]),
            pattern=record["pattern"],
            op=record["op"],
            probe=record.get("probe"),
            rank_key=record.get("rank_key"),
            rank_order=record.get("rank_order", "asc"),
            signals=tuple(record.get("signals", ())),
            requires_negation=bool(record.get("requires_negation", False)),
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad template record {record.get('id', '?')!r}: {exc}") from exc
    validate_template(template)
    return template


@dataclass
class TemplateBank:
    templates: tuple[Template, ...]
    _cells: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for template in self.templates:
            key = (template.category, template.answer_type, template.answer_format)
            self._cells.setdefault(key, []).append(template)

    def select(
        self,
        category: QuestionCategory,
        answer_type: AnswerType,
        answer_format: AnswerFormat,
        group: str | None = None,
        include_negation: bool = False,
    ) -> list[Template]:
        pool = self._cells.get((category, answer_type, answer_format), [])
        if group is not None:
            pool = [t for t in pool if t.group == group]
        if not include_negation:
            pool = [t for t in pool if not t.requires_negation]
        if not pool:
            raise ConfigError(
                f"no template for {category} / {answer_type.value} / "
                f"{answer_format.value}" + (f" / group {group}" if group else "")
            )
        return pool

    def formats_for(
        self,
        category: QuestionCategory,
        answer_type: AnswerType,
        group: str,
        include_negation: bool = False,
    ) -> list[AnswerFormat]:
        found = []
        for fmt in AnswerFormat:
            pool = self._cells.get((category, answer_type, fmt), [])
            pool = [t for t in pool if t.group == group]
            if not include_negation:
                pool = [t for t in pool if not t.requires_negation]
            if pool:
                found.append(fmt)
        return found


def load_template_bank(path: str | Path | None = None) -> TemplateBank:
    """Load templates from a JSONL file, or the packaged starter bank."""
    if path is None:
        text = resources.files("tkgqa").joinpath("data/templates.jsonl").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    templates = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"template bank line {line_no}: {exc}") from exc
        templates.append(template_from_record(record))
    if not templates:
        raise ConfigError("template bank is empty")
    return TemplateBank(tuple(templates))

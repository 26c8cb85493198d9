"""Question/answer pair generation, stratified splits, and dataset files.

Each context-fact sample flows through a generation path keyed by its
size: one fact yields one question per configured simple answer type,
two and three facts yield one factual and one temporal question each.
Every answer is computed through the algebra module and every pair keeps
a derivation, so a full dataset can be re-checked answer by answer.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .algebra import (
    compare_duration,
    duration,
    intersection,
    negation,
    rank_facts,
    signal_word_for_semantic,
    union,
)
from .allen import allen_relation
from .categories import (
    AnswerFormat,
    AnswerType,
    Capability,
    Focus,
    Level,
    QuestionCategory,
    capabilities_for,
)
from .errors import ConfigError, DomainError
from .kg import Fact, TemporalKG
from .sampler import STREAM_GENERATOR, STREAM_SPLIT, FactSampler, SamplerConfig, rng_for
from .templates import _SLOT_RE, Template, TemplateBank
from .timeline import POS_INF, TimeInterval, format_timestamp

SPLITS = ("train", "val", "test")

DEFAULT_SIMPLE_ANSWER_TYPES = (
    AnswerType.SUBJECT,
    AnswerType.OBJECT,
    AnswerType.TIMESTAMP_START,
    AnswerType.TIMESTAMP_END,
    AnswerType.TIMESTAMP_RANGE,
    AnswerType.DURATION,
)

# Mode without the range question: one factual pair per entity slot plus
# start, end, and duration.
FIVE_QUESTION_SIMPLE_ANSWER_TYPES = tuple(
    at for at in DEFAULT_SIMPLE_ANSWER_TYPES if at is not AnswerType.TIMESTAMP_RANGE
)

_BEFORE_KINDS = frozenset({"before", "point-before", "before-point", "points-before"})
_AFTER_KINDS = frozenset({"after", "point-after", "after-point", "points-after"})

_ORDINAL_WORDS = {1: "first", 2: "second", 3: "third"}

_ALLEN_WORD_POOL = (
    "before",
    "after",
    "during",
    "meets",
    "met-by",
    "starts",
    "started-by",
    "finishes",
    "finished-by",
    "equal",
)

_STOCK_CHOICES = ("none of the others", "cannot be determined", "no single answer")


@dataclass(frozen=True)
class Derivation:
    """Everything needed to recompute a pair's answer from the graph."""

    op: str
    fact_ids: tuple[int, ...]
    probe: str | None = None
    rank_key: str | None = None
    rank_order: str | None = None
    ordinal: int | None = None


@dataclass
class QAPair:
    id: int
    question: str
    answer: str
    level: Level
    focus: Focus
    answer_type: AnswerType
    answer_format: AnswerFormat
    capabilities: frozenset[Capability]
    context_fact_ids: tuple[int, ...]
    signal_words: tuple[str, ...]
    split: str = ""
    paraphrased: bool = False
    derivation: Derivation | None = field(default=None, repr=False, compare=False)
    surface_forms: tuple[str, ...] = field(default=(), repr=False, compare=False)
    choices: tuple[str, ...] = field(default=(), repr=False, compare=False)

    @property
    def category(self) -> QuestionCategory:
        return QuestionCategory(self.level, self.focus)

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "question": self.question,
            "answer": self.answer,
            "level": self.level.value,
            "focus": self.focus.value,
            "answer_type": self.answer_type.value,
            "answer_format": self.answer_format.value,
            "capabilities": sorted(c.value for c in self.capabilities),
            "context_fact_ids": list(self.context_fact_ids),
            "signal_words": list(self.signal_words),
            "split": self.split,
            "paraphrased": self.paraphrased,
        }

    @staticmethod
    def from_record(record: dict) -> "QAPair":
        return QAPair(
            id=record["id"],
            question=record["question"],
            answer=record["answer"],
            level=Level(record["level"]),
            focus=Focus(record["focus"]),
            answer_type=AnswerType(record["answer_type"]),
            answer_format=AnswerFormat(record["answer_format"]),
            capabilities=frozenset(Capability(c) for c in record["capabilities"]),
            context_fact_ids=tuple(record["context_fact_ids"]),
            signal_words=tuple(record["signal_words"]),
            split=record["split"],
            paraphrased=record["paraphrased"],
        )


def _yes_no(truth: bool) -> str:
    return "Yes" if truth else "No"


def _dur_text(value) -> str:
    return "unbounded" if value == POS_INF else str(int(value))


def rederive_answer(derivation: Derivation, kg: TemporalKG) -> str:
    """Recompute a pair's answer from its context facts alone."""
    facts = [kg.facts[i] for i in derivation.fact_ids]
    ivs = [f.interval for f in facts]
    gran = kg.granularity
    op = derivation.op
    if op == "subject":
        return kg.entity_name(facts[0].subject)
    if op == "object":
        return kg.entity_name(facts[0].object)
    if op == "t_start":
        return format_timestamp(ivs[0].start, gran)
    if op == "t_end":
        return format_timestamp(ivs[0].end, gran)
    if op == "t_range":
        return ivs[0].render(gran)
    if op == "duration":
        return _dur_text(duration(ivs[0]))
    if op in ("union_range", "union_range_mc"):
        return union(ivs).render(gran)
    if op in ("union_duration", "union_duration_mc"):
        return _dur_text(union(ivs).total_duration())
    if op in ("intersection_range", "intersection_range_mc"):
        return intersection(ivs).render(gran)
    if op == "negation_range":
        return negation(union(ivs)).render(gran)
    if op == "allen_probe":
        kinds = _BEFORE_KINDS if derivation.probe == "before" else _AFTER_KINDS
        return _yes_no(allen_relation(ivs[0], ivs[1]).kind in kinds)
    if op == "intersect_nonempty":
        return _yes_no(not intersection(ivs).is_empty())
    if op == "before_all":
        return _yes_no(
            all(allen_relation(ivs[0], other).kind in _BEFORE_KINDS for other in ivs[1:])
        )
    if op == "any_pair_intersect":
        return _yes_no(
            any(not intersection(list(pair)).is_empty() for pair in itertools.combinations(ivs, 2))
        )
    if op == "allen_word_mc":
        return signal_word_for_semantic(allen_relation(ivs[0], ivs[1]).semantic)
    if op in ("duration_diff", "duration_diff_mc"):
        delta = compare_duration(ivs[0], ivs[1])
        return "indeterminate" if delta.indeterminate else _dur_text(delta.magnitude)
    if op in ("duration_max", "duration_max_mc"):
        return _dur_text(max(duration(iv) for iv in ivs))
    if op in ("duration_min", "duration_min_mc"):
        return _dur_text(min(duration(iv) for iv in ivs))
    if op in ("duration_spread", "duration_spread_mc"):
        values = [duration(iv) for iv in ivs]
        hi, lo = max(values), min(values)
        if hi == POS_INF and lo == POS_INF:
            return "indeterminate"
        return _dur_text(hi - lo)
    if op == "duration_compare":
        delta = compare_duration(ivs[0], ivs[1])
        if derivation.probe == "longer":
            return _yes_no(delta.sign > 0)
        if derivation.probe == "shorter":
            return _yes_no(delta.sign < 0)
        return _yes_no(delta.sign == 0 and not delta.indeterminate)
    if op == "duration_longest_is_first":
        return _yes_no(all(compare_duration(ivs[0], o).sign > 0 for o in ivs[1:]))
    if op == "duration_shortest_is_first":
        return _yes_no(all(compare_duration(ivs[0], o).sign < 0 for o in ivs[1:]))
    if op == "duration_all_equal":
        deltas = [compare_duration(ivs[0], o) for o in ivs[1:]]
        return _yes_no(all(d.sign == 0 and not d.indeterminate for d in deltas))
    if op in ("rank_entity", "rank_entity_mc"):
        ranked = rank_facts(facts, key=derivation.rank_key, order=derivation.rank_order)
        matches = [f for f, o in ranked if o == derivation.ordinal]
        if len(matches) != 1:
            raise DomainError(f"ordinal {derivation.ordinal} is not unique")
        return kg.entity_name(matches[0].subject)
    raise ConfigError(f"unknown derivation op {op!r}")


# --- slot filling ---------------------------------------------------------


def _slot_values(facts: list[Fact], kg: TemporalKG, extra: dict) -> dict:
    values = {"unit": kg.granularity, "units": kg.granularity + "s"}
    for index, fact in enumerate(facts, start=1):
        suffix = "" if index == 1 else str(index)
        values["subject" + suffix] = kg.entity_name(fact.subject)
        values["predicate" + suffix] = kg.relation_name(fact.predicate)
        values["object" + suffix] = kg.entity_name(fact.object)
        values["t_start" + suffix] = format_timestamp(fact.interval.start, kg.granularity)
        values["t_end" + suffix] = format_timestamp(fact.interval.end, kg.granularity)
    values.update(extra)
    return values


def _fill(pattern: str, values: dict) -> str:
    def substitute(match):
        name = match.group(1)
        if name not in values:
            raise ConfigError(f"no value for slot {{{name}}}")
        return str(values[name])

    return _SLOT_RE.sub(substitute, pattern)


def _surface_forms(template: Template, values: dict) -> tuple[str, ...]:
    """Entity and timestamp strings whose survival the paraphrase guard checks."""
    keep = []
    for slot in sorted(template.slots()):
        if slot.rstrip("23") in ("subject", "object", "t_start", "t_end"):
            keep.append(values[slot])
    return tuple(dict.fromkeys(keep))


def _pick(pool: list[Template], rng: np.random.Generator) -> Template:
    return pool[int(rng.integers(len(pool)))]


def _render_choices(choices: list[str]) -> str:
    if len(choices) == 1:
        return choices[0]
    return ", ".join(choices[:-1]) + ", or " + choices[-1]


# --- multiple-choice distractors ------------------------------------------


def _sibling_fact_ids(kg: TemporalKG, facts: list[Fact]) -> list[int]:
    exclude = {f.id for f in facts}
    out, seen = [], set()
    for fact in facts:
        for eid in (fact.subject, fact.object):
            for fid in kg.entity_index.get(eid, ()):
                if fid not in exclude and fid not in seen:
                    seen.add(fid)
                    out.append(fid)
    return out


def _take_distractors(candidates: list[str], true_text: str, rng, n=3) -> list[str]:
    unique = [c for c in dict.fromkeys(candidates) if c != true_text]
    if len(unique) > n:
        order = rng.permutation(len(unique))
        unique = [unique[i] for i in order[:n]]
    return unique[:n]


def _range_distractors(true_text, facts, kg, rng) -> list[str]:
    pool = []
    for fid in _sibling_fact_ids(kg, facts) + [f.id for f in kg.facts]:
        interval = kg.facts[fid].interval
        if isinstance(interval, TimeInterval) and kg.facts[fid].id not in {f.id for f in facts}:
            pool.append(interval.render(kg.granularity))
    picked = _take_distractors(pool, true_text, rng)
    anchor = facts[0].interval
    shift = 1
    while len(picked) < 3:
        if isinstance(anchor.start, int) and isinstance(anchor.end, int):
            variant = TimeInterval(anchor.start + shift, anchor.end + shift)
        else:
            variant = TimeInterval(shift, shift + 4)
        text = variant.render(kg.granularity)
        if text != true_text and text not in picked:
            picked.append(text)
        shift += 1
    return picked


def _number_distractors(true_text, facts, kg, rng) -> list[str]:
    pool = [
        _dur_text(duration(f.interval))
        for f in kg.facts
        if isinstance(f.interval, TimeInterval) and f.id not in {x.id for x in facts}
    ]
    picked = _take_distractors(pool, true_text, rng)
    base = int(true_text) if true_text.isdigit() else 0
    offset = 1
    while len(picked) < 3:
        for candidate in (base + offset, base - offset):
            text = str(candidate)
            if candidate >= 0 and text != true_text and text not in picked and len(picked) < 3:
                picked.append(text)
        offset += 1
    return picked


def _word_distractors(true_text, rng) -> list[str]:
    return _take_distractors(list(_ALLEN_WORD_POOL), true_text, rng)


def _entity_distractors(true_text, facts, kg, rng) -> list[str]:
    pool = [kg.entity_name(f.subject) for f in facts]
    for fid in _sibling_fact_ids(kg, facts):
        pool.append(kg.entity_name(kg.facts[fid].subject))
    pool.extend(kg.entity_names)
    picked = _take_distractors(pool, true_text, rng)
    for stock in _STOCK_CHOICES:
        if len(picked) >= 3:
            break
        if stock not in picked:
            picked.append(stock)
    return picked


def _distractors_for(op: str, true_text: str, facts, kg, rng) -> list[str]:
    if op in ("union_range_mc", "intersection_range_mc"):
        return _range_distractors(true_text, facts, kg, rng)
    if op == "allen_word_mc":
        return _word_distractors(true_text, rng)
    if op == "rank_entity_mc":
        return _entity_distractors(true_text, facts, kg, rng)
    return _number_distractors(true_text, facts, kg, rng)


# --- generation paths ------------------------------------------------------


def _make_pair(
    template: Template,
    facts: list[Fact],
    kg: TemporalKG,
    derivation: Derivation,
    context_ids: tuple[int, ...],
    rng: np.random.Generator,
    extra_slots: dict | None = None,
    extra_signals: tuple[str, ...] = (),
) -> QAPair:
    answer = rederive_answer(derivation, kg)
    values = _slot_values(facts, kg, dict(extra_slots or {}))
    choices: tuple[str, ...] = ()
    if template.answer_format is AnswerFormat.MULTIPLE_CHOICE:
        distractors = _distractors_for(template.op, answer, facts, kg, rng)
        options = [answer] + distractors
        order = rng.permutation(len(options))
        choices = tuple(options[i] for i in order)
        values["choice_list"] = _render_choices(list(choices))
    question = _fill(template.pattern, values)
    category = template.category
    return QAPair(
        id=-1,
        question=question,
        answer=answer,
        level=category.level,
        focus=category.focus,
        answer_type=template.answer_type,
        answer_format=template.answer_format,
        capabilities=capabilities_for(category),
        context_fact_ids=context_ids,
        signal_words=tuple(dict.fromkeys(template.signals + extra_signals)),
        derivation=derivation,
        surface_forms=_surface_forms(template, values),
        choices=choices,
    )


def generate_simple(
    fact: Fact,
    kg: TemporalKG,
    bank: TemplateBank,
    rng: np.random.Generator,
    answer_types: tuple[AnswerType, ...] = DEFAULT_SIMPLE_ANSWER_TYPES,
) -> list[QAPair]:
    """One open question per configured answer type about a single fact."""
    if not fact.has_time:
        raise DomainError(f"fact {fact.id} has no temporal information")
    pairs = []
    for answer_type in answer_types:
        focus = Focus.FACTUAL if answer_type in (AnswerType.SUBJECT, AnswerType.OBJECT) else Focus.TEMPORAL
        category = QuestionCategory(Level.SIMPLE, focus)
        template = _pick(bank.select(category, answer_type, AnswerFormat.OPEN), rng)
        derivation = Derivation(op=template.op, fact_ids=(fact.id,))
        pairs.append(_make_pair(template, [fact], kg, derivation, (fact.id,), rng))
    return pairs


def _factual_pair(facts, kg, bank, rng, level) -> QAPair:
    answer_type = AnswerType.SUBJECT if int(rng.integers(2)) == 0 else AnswerType.OBJECT
    target = int(rng.integers(len(facts)))
    ordered = [facts[target]] + [f for i, f in enumerate(facts) if i != target]
    category = QuestionCategory(level, Focus.FACTUAL)
    template = _pick(bank.select(category, answer_type, AnswerFormat.OPEN), rng)
    signals = []
    extra = {}
    for anchor_index, anchor in enumerate(ordered[1:], start=1):
        word = signal_word_for_semantic(
            allen_relation(ordered[0].interval, anchor.interval).semantic
        )
        extra["signal" if anchor_index == 1 else "signal2"] = word
        signals.append(word)
    derivation = Derivation(op=template.op, fact_ids=tuple(f.id for f in ordered))
    return _make_pair(
        template,
        ordered,
        kg,
        derivation,
        tuple(f.id for f in facts),
        rng,
        extra_slots=extra,
        extra_signals=tuple(signals),
    )


def _temporal_pair(facts, kg, bank, rng, level, enable_negation) -> QAPair:
    category = QuestionCategory(level, Focus.TEMPORAL)
    if level is Level.MEDIUM:
        groups = ("setop", "allen", "duration")
    else:
        groups = ("setop", "duration", "ranking")
    group = groups[int(rng.integers(len(groups)))]
    extra: dict = {}
    derivation_fields: dict = {}

    if group == "ranking":
        answer_type = AnswerType.RELATION_RANKING
        formats = bank.formats_for(category, answer_type, group)
        template = _pick(bank.select(category, answer_type, formats[int(rng.integers(len(formats)))], group=group), rng)
        ranked = rank_facts(list(facts), key=template.rank_key, order=template.rank_order)
        counts = Counter(ordinal for _, ordinal in ranked)
        unique = sorted(o for o, c in counts.items() if c == 1)
        if not unique:
            group = "setop"  # all tied on this key; ask a set question instead
        else:
            ordinal = int(unique[int(rng.integers(len(unique)))])
            word = _ORDINAL_WORDS[ordinal]
            if ordinal == len(facts) and int(rng.integers(2)) == 0:
                word = "last"
            extra["ordinal"] = word
            derivation_fields = {
                "rank_key": template.rank_key,
                "rank_order": template.rank_order,
                "ordinal": ordinal,
            }

    if group != "ranking":
        answer_type = (
            AnswerType.RELATION_DURATION
            if group == "duration"
            else AnswerType.RELATION_UNION_OR_INTERSECTION
        )
        formats = bank.formats_for(category, answer_type, group, include_negation=enable_negation)
        answer_format = formats[int(rng.integers(len(formats)))]
        template = _pick(
            bank.select(category, answer_type, answer_format, group=group, include_negation=enable_negation),
            rng,
        )

    derivation = Derivation(
        op=template.op,
        fact_ids=tuple(f.id for f in facts),
        probe=template.probe,
        **derivation_fields,
    )
    return _make_pair(
        template, list(facts), kg, derivation, tuple(f.id for f in facts), rng, extra_slots=extra
    )


def generate_medium(
    facts: list[Fact],
    kg: TemporalKG,
    bank: TemplateBank,
    rng: np.random.Generator,
    enable_negation: bool = False,
) -> list[QAPair]:
    """A factual and a temporal question over a pair of facts."""
    if len(facts) != 2 or len({f.id for f in facts}) != 2:
        raise DomainError("medium generation needs two distinct facts")
    return [
        _factual_pair(facts, kg, bank, rng, Level.MEDIUM),
        _temporal_pair(facts, kg, bank, rng, Level.MEDIUM, enable_negation),
    ]


def generate_complex(
    facts: list[Fact],
    kg: TemporalKG,
    bank: TemplateBank,
    rng: np.random.Generator,
    enable_negation: bool = False,
) -> list[QAPair]:
    """A factual and a temporal question over a triple of facts."""
    if len(facts) != 3 or len({f.id for f in facts}) != 3:
        raise DomainError("complex generation needs three distinct facts")
    return [
        _factual_pair(facts, kg, bank, rng, Level.COMPLEX),
        _temporal_pair(facts, kg, bank, rng, Level.COMPLEX, enable_negation),
    ]


def audit_pairs(pairs: list[QAPair], kg: TemporalKG) -> None:
    """Re-derive every answer through the algebra; raise on any mismatch."""
    bad = []
    for pair in pairs:
        if pair.derivation is None or rederive_answer(pair.derivation, kg) != pair.answer:
            bad.append(pair.id)
        elif pair.choices and pair.choices.count(pair.answer) != 1:
            bad.append(pair.id)
    if bad:
        raise DomainError(f"answer audit failed for {len(bad)} pairs, e.g. {bad[:5]}")


# --- dataset assembly ------------------------------------------------------


def generate_pairs(
    kg: TemporalKG,
    bank: TemplateBank,
    sampler_cfg: SamplerConfig,
    counts: dict[str, int],
    simple_answer_types: tuple[AnswerType, ...] = DEFAULT_SIMPLE_ANSWER_TYPES,
    enable_negation: bool = False,
    threads: int | None = None,
) -> list[QAPair]:
    """Sample contexts and generate the full pair list, ids assigned in
    draw order.  Output is independent of the thread count."""
    n_simple = int(counts.get("simple", 0))
    n_medium = int(counts.get("medium", 0))
    n_complex = int(counts.get("complex", 0))
    multi_sampler = FactSampler(kg, sampler_cfg)
    simple_sampler = (
        FactSampler(kg, replace(sampler_cfg, allow_timeless=False))
        if sampler_cfg.allow_timeless
        else multi_sampler
    )

    def job(draw_index: int) -> list[QAPair]:
        rng = rng_for(sampler_cfg.seed, STREAM_GENERATOR, draw_index)
        if draw_index < n_simple:
            sample = simple_sampler.draw(1, draw_index)
            fact = kg.facts[sample.fact_ids[0]]
            return generate_simple(fact, kg, bank, rng, simple_answer_types)
        sample_size = 2 if draw_index < n_simple + n_medium else 3
        sample = multi_sampler.draw(sample_size, draw_index)
        facts = [kg.facts[i] for i in sample.fact_ids]
        if sample_size == 2:
            return generate_medium(facts, kg, bank, rng, enable_negation)
        return generate_complex(facts, kg, bank, rng, enable_negation)

    total = n_simple + n_medium + n_complex
    with ThreadPoolExecutor(max_workers=threads) as pool:
        batches = list(pool.map(job, range(total)))
    pairs = []
    for batch in batches:
        for pair in batch:
            pair.id = len(pairs)
            pairs.append(pair)
    audit_pairs(pairs, kg)
    return pairs


def assign_splits(pairs: list[QAPair], ratios, rng: np.random.Generator) -> list[QAPair]:
    """Stratified train/val/test assignment.

    Groups sharing one context-fact set always land in the same split;
    within each (category, answer type) stratum the split sizes track the
    ratios to within one item.
    """
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != len(SPLITS):
        raise ConfigError(f"need {len(SPLITS)} split ratios")
    if any(r < 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
        raise ConfigError("split ratios must be non-negative and sum to 1")
    if not pairs:
        return pairs

    groups: dict[frozenset, list[QAPair]] = {}
    for pair in pairs:
        groups.setdefault(frozenset(pair.context_fact_ids), []).append(pair)
    group_list = sorted(groups.values(), key=lambda g: min(p.id for p in g))
    order = rng.permutation(len(group_list))

    assigned = {split: Counter() for split in SPLITS}
    seen: Counter = Counter()
    for position in order:
        group = group_list[position]
        strata = Counter((p.level, p.answer_type) for p in group)
        best_split, best_score = None, None
        for split, ratio in zip(SPLITS, ratios):
            score = sum(
                count * (ratio * (seen[stratum] + count) - assigned[split][stratum])
                for stratum, count in strata.items()
            )
            if best_score is None or score > best_score:
                best_split, best_score = split, score
        for stratum, count in strata.items():
            assigned[best_split][stratum] += count
            seen[stratum] += count
        for pair in group:
            pair.split = best_split
    return pairs


def dataset_stats(records: list[dict]) -> dict:
    stats = {
        "total": len(records),
        "paraphrased": 0,
        "by_split": {split: 0 for split in SPLITS},
        "by_level": {level.value: 0 for level in Level},
        "by_category": {f"{lv.value}.{fc.value}": 0 for lv in Level for fc in Focus},
        "by_answer_type": {at.value: 0 for at in AnswerType},
        "by_answer_format": {fmt.value: 0 for fmt in AnswerFormat},
        "by_capability": {cap.value: 0 for cap in Capability},
        "by_split_level": {
            split: {level.value: 0 for level in Level} for split in SPLITS
        },
    }
    for record in records:
        stats["paraphrased"] += bool(record["paraphrased"])
        stats["by_split"][record["split"]] += 1
        stats["by_level"][record["level"]] += 1
        stats["by_category"][f"{record['level']}.{record['focus']}"] += 1
        stats["by_answer_type"][record["answer_type"]] += 1
        stats["by_answer_format"][record["answer_format"]] += 1
        for capability in record["capabilities"]:
            stats["by_capability"][capability] += 1
        stats["by_split_level"][record["split"]][record["level"]] += 1
    return stats


def write_dataset(pairs: list[QAPair], out_dir: str | Path) -> list[Path]:
    """Write train/val/test JSONL plus stats.json; byte-stable."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for split in SPLITS:
        path = out / f"{split}.jsonl"
        rows = sorted((p for p in pairs if p.split == split), key=lambda p: p.id)
        with open(path, "w", encoding="utf-8") as handle:
            for pair in rows:
                handle.write(json.dumps(pair.to_record(), ensure_ascii=False) + "\n")
        written.append(path)
    stats_path = out / "stats.json"
    stats = dataset_stats([p.to_record() for p in pairs])
    stats_path.write_text(
        json.dumps(stats, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    written.append(stats_path)
    return written


def read_records(path: str | Path) -> list[dict]:
    """Load dataset records from a JSONL file or a split directory."""
    path = Path(path)
    files = [path / f"{split}.jsonl" for split in SPLITS] if path.is_dir() else [path]
    records = []
    for file in files:
        for line in file.read_text(encoding="utf-8").splitlines():
            if line.strip():
                records.append(json.loads(line))
    return records

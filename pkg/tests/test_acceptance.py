"""Acceptance suite: one test per exit criterion, each printing a PASS line
with its measured result when it holds (a failed assertion means FAIL)."""

import json
import math
import random
import time
from collections import Counter

import numpy as np
import pytest

from tkgqa.algebra import intersection, negation, tso, union
from tkgqa.allen import ALLEN_DICTIONARY, allen_relation, signature
from tkgqa.categories import QuestionCategory, capabilities_for
from tkgqa.cli import main
from tkgqa.generator import (
    assign_splits,
    audit_pairs,
    generate_pairs,
    generate_simple,
    read_records,
    rederive_answer,
)
from tkgqa.metrics import RankingRun, hits_at_k, reciprocal_rank, write_runs
from tkgqa.ranking import cosine_embedding_loss, write_vector_file
from tkgqa.sampler import STREAM_GENERATOR, STREAM_SPLIT, SamplerConfig, rng_for
from tkgqa.templates import load_template_bank
from tkgqa.timeline import NEG_INF, POS_INF, TimeInterval

from conftest import make_kg, synthetic_rows, write_fact_file


@pytest.fixture(scope="module")
def bank():
    return load_template_bank()


@pytest.fixture(scope="module")
def toy_dataset(bank):
    """A generated toy dataset of at least 500 pairs across all categories."""
    kg = make_kg(synthetic_rows(80, span=500, seed=101))
    pairs = generate_pairs(
        kg,
        bank,
        SamplerConfig(seed=1234),
        {"simple": 40, "medium": 80, "complex": 80},
    )
    assign_splits(pairs, (0.6, 0.2, 0.2), rng_for(1234, STREAM_SPLIT, 0))
    return kg, pairs


def grid_intervals(lo, hi):
    return [TimeInterval(s, e) for s in range(lo, hi + 1) for e in range(s, hi + 1)]


def test_criterion_1_allen_dictionary_exhaustive():
    started = time.perf_counter()
    intervals = grid_intervals(0, 6)
    assert len(intervals) == 28
    reached = set()
    misses = 0
    for a in intervals:
        for b in intervals:
            sig = signature(a, b)
            if sig not in ALLEN_DICTIONARY:
                misses += 1
            reached.add(sig)
    elapsed = time.perf_counter() - started
    assert misses == 0
    assert reached == set(ALLEN_DICTIONARY)
    assert elapsed < 1.0
    print(
        f"\nPASS criterion 1: {len(intervals) ** 2} interval pairs hit all "
        f"{len(ALLEN_DICTIONARY)} dictionary keys with 0 misses in {elapsed:.3f}s"
    )


def test_criterion_2_converse_closure():
    intervals = grid_intervals(0, 6)
    violations = 0
    for a in intervals:
        for b in intervals:
            if allen_relation(b, a).kind != allen_relation(a, b).converse:
                violations += 1
    assert violations == 0
    print(f"\nPASS criterion 2: converse identities hold for all {len(intervals) ** 2} pairs")


def test_criterion_3_tso_worked_examples():
    before = tso("before", TimeInterval(2008, 2008))
    during = tso("during", TimeInterval(1964, 1968))
    assert before == TimeInterval(NEG_INF, 2008)
    assert during == TimeInterval(1964, 1968)
    print(
        "\nPASS criterion 3: tso(before, 2008) = (-inf, 2008] and "
        "tso(during, [1964, 1968]) = [1964, 1968]"
    )


def test_criterion_4_union_duration_example():
    merged = union([TimeInterval(2001, 2009), TimeInterval(2009, 2017)])
    assert merged.total_duration() == 16
    print("\nPASS criterion 4: union([2001,2009],[2009,2017]) spans exactly 16 years")


def test_criterion_5_set_operation_oracle():
    started = time.perf_counter()
    grid = range(-20, 21)
    rng = random.Random(20240)
    mismatches = 0
    for _ in range(1000):
        intervals = []
        for _ in range(rng.randint(1, 3)):
            start = rng.randint(-20, 20)
            end = min(20, start + rng.randint(0, 15))
            intervals.append(TimeInterval(start, end))
        union_set = union(intervals)
        inter_set = intersection(intervals)
        neg_set = negation(union_set)
        for x in grid:
            in_any = any(iv.contains_value(x) for iv in intervals)
            in_all = all(iv.contains_value(x) for iv in intervals)
            if union_set.contains_value(x) != in_any:
                mismatches += 1
            if inter_set.contains_value(x) != in_all:
                mismatches += 1
            if neg_set.contains_value(x) != (not in_any):
                mismatches += 1
    elapsed = time.perf_counter() - started
    assert mismatches == 0
    assert elapsed < 5.0
    print(
        f"\nPASS criterion 5: union/intersection/negation match brute-force "
        f"membership on 1000 instances with 0 mismatches in {elapsed:.2f}s"
    )


def test_criterion_6_metric_oracle():
    def brute_hits(ranked, relevant, k):
        window = list(ranked)[: len(relevant) * k]
        return 1 if all(r in window for r in relevant) else 0

    def brute_rr(ranked, relevant):
        c = len(relevant)
        rank = sum(i // c for i, fid in enumerate(ranked) if fid in relevant)
        rank += sum(1 for r in relevant if r not in ranked) * (len(ranked) // c)
        return 1.0 / (rank + 1)

    started = time.perf_counter()
    rng = random.Random(777)
    mismatches = 0
    for _ in range(10_000):
        c = rng.choice((1, 2, 3))
        ranked = rng.sample(range(120), rng.randint(0, 50))
        relevant = set(rng.sample(range(120), c))
        run = RankingRun(query_id=0, ranked_fact_ids=tuple(ranked))
        for k in (1, 3, 10):
            if hits_at_k(run, relevant, k) != brute_hits(ranked, relevant, k):
                mismatches += 1
        if reciprocal_rank(run, relevant) != brute_rr(ranked, relevant):
            mismatches += 1
    elapsed = time.perf_counter() - started

    spot = RankingRun(query_id=0, ranked_fact_ids=(5, 1, 2, 6))
    assert hits_at_k(spot, {5, 6}, 1) == 0
    assert hits_at_k(spot, {5, 6}, 2) == 1
    assert reciprocal_rank(RankingRun(0, (9, 5, 6, 0)), {5, 6}) == 0.5

    assert mismatches == 0
    assert elapsed < 10.0
    print(
        f"\nPASS criterion 6: hits@K and reciprocal rank match brute force on "
        f"10000 instances (0 mismatches, {elapsed:.2f}s) plus the spot values"
    )


def test_criterion_7_category_structure(toy_dataset):
    _, pairs = toy_dataset
    assert len(pairs) >= 500
    arity = {"simple": 1, "medium": 2, "complex": 3}
    for pair in pairs:
        assert len(pair.context_fact_ids) == arity[pair.level.value]
        assert pair.capabilities == capabilities_for(pair.category)
    categories = Counter(str(pair.category) for pair in pairs)
    assert set(categories) == {
        "simple.factual",
        "simple.temporal",
        "medium.factual",
        "medium.temporal",
        "complex.factual",
        "complex.temporal",
    }
    assert categories["medium.temporal"] > 0
    print(
        f"\nPASS criterion 7: {len(pairs)} pairs all satisfy level arity and "
        f"capability fixity; all six categories populated "
        f"(medium.temporal = {categories['medium.temporal']})"
    )


def test_criterion_8_answer_self_audit(toy_dataset):
    kg, pairs = toy_dataset
    audit_pairs(pairs, kg)
    rechecked = sum(
        1 for pair in pairs if rederive_answer(pair.derivation, kg) == pair.answer
    )
    assert rechecked == len(pairs)
    print(f"\nPASS criterion 8: all {len(pairs)} answers re-derive from context facts")


def test_criterion_9_split_fidelity(bank):
    kg = make_kg(synthetic_rows(4995, span=100_000, seed=13))
    pairs = []
    for fact in kg.facts:
        rng = rng_for(0, STREAM_GENERATOR, fact.id)
        for pair in generate_simple(fact, kg, bank, rng):
            pair.id = len(pairs)
            pairs.append(pair)
    assert len(pairs) == 29_970
    assign_splits(pairs, (0.6, 0.2, 0.2), rng_for(0, STREAM_SPLIT, 0))
    counts = Counter(pair.split for pair in pairs)
    assert counts == {"train": 17_982, "val": 5_994, "test": 5_994}

    # arbitrary sizes stay within one item per stratum
    for n_facts, seed in ((37, 3), (101, 4), (250, 5)):
        small_kg = make_kg(synthetic_rows(n_facts, span=2000, seed=seed))
        small = generate_pairs(
            small_kg,
            bank,
            SamplerConfig(seed=seed),
            {"simple": n_facts // 2, "medium": n_facts, "complex": n_facts},
        )
        assign_splits(small, (0.6, 0.2, 0.2), rng_for(seed, STREAM_SPLIT, 0))
        strata = {}
        for pair in small:
            strata.setdefault((pair.level, pair.answer_type), Counter())[pair.split] += 1
        for stratum, split_counts in strata.items():
            total = sum(split_counts.values())
            for split, ratio in zip(("train", "val", "test"), (0.6, 0.2, 0.2)):
                deviation = abs(split_counts[split] - ratio * total)
                assert deviation <= 1, (stratum, split_counts)
    print(
        "\nPASS criterion 9: 29970 simple questions split exactly "
        "17982/5994/5994; three arbitrary-size runs stay within +/-1 per stratum"
    )


def test_criterion_10_generate_determinism(tmp_path):
    facts = write_fact_file(tmp_path / "facts.txt", synthetic_rows(50, span=400, seed=7))
    config = tmp_path / "config.json"
    config.write_text(
        json.dumps({"counts": {"simple": 20, "medium": 20, "complex": 20}}),
        encoding="utf-8",
    )
    outputs = []
    for name, threads in (("a", "1"), ("b", "13")):
        out = tmp_path / name
        code = main(
            [
                "generate",
                "--facts",
                str(facts),
                "--out",
                str(out),
                "--config",
                str(config),
                "--seed",
                "99",
                "--granularity",
                "year",
                "--threads",
                threads,
            ]
        )
        assert code == 0
        outputs.append(out)
    for file_name in ("train.jsonl", "val.jsonl", "test.jsonl", "stats.json"):
        assert (outputs[0] / file_name).read_bytes() == (outputs[1] / file_name).read_bytes()
    print(
        "\nPASS criterion 10: generate runs with threads=1 and threads=13 "
        "produced byte-identical dataset files"
    )


def test_criterion_11_cosine_loss_spot_values():
    v = np.array([0.4, -1.2, 2.2, 0.05])
    positive = cosine_embedding_loss(v, v.copy(), margin=0.5, label=1)
    assert abs(positive - 0.0) <= 1e-12
    vq = np.array([1.0, 0.0])
    vf = np.array([0.9, math.sqrt(1.0 - 0.81)])
    negative = cosine_embedding_loss(vq, vf, margin=0.5, label=-1)
    assert abs(negative - 0.4) <= 1e-12
    print(
        "\nPASS criterion 11: loss(y=+1, vf=vq) = 0 and "
        "loss(y=-1, cos=0.9, margin=0.5) = 0.4 within 1e-12"
    )


def test_criterion_12_offline_pipeline(tmp_path, no_network):
    facts = write_fact_file(tmp_path / "facts.txt", synthetic_rows(30, span=300, seed=23))
    out = tmp_path / "dataset"
    config = tmp_path / "config.json"
    config.write_text(
        json.dumps({"counts": {"simple": 10, "medium": 10, "complex": 10}}),
        encoding="utf-8",
    )
    assert (
        main(
            [
                "generate",
                "--facts",
                str(facts),
                "--out",
                str(out),
                "--config",
                str(config),
                "--seed",
                "5",
                "--granularity",
                "year",
                "--paraphrase",
                "none",
            ]
        )
        == 0
    )
    records = read_records(out)

    rng = np.random.default_rng(11)
    fact_vecs = {fid: rng.normal(size=16) for fid in range(30)}
    query_vecs = {r["id"]: fact_vecs[r["context_fact_ids"][0]] for r in records}
    qv, fv = tmp_path / "q.txt", tmp_path / "f.txt"
    write_vector_file(qv, query_vecs)
    write_vector_file(fv, fact_vecs)
    report = tmp_path / "report.json"
    assert (
        main(
            [
                "evaluate",
                "--qa",
                str(out),
                "--mode",
                "rag",
                "--query-vectors",
                str(qv),
                "--fact-vectors",
                str(fv),
                "--report",
                str(report),
            ]
        )
        == 0
    )
    payload = json.loads(report.read_text())
    assert payload["counts"]["overall"] == len(records)
    print(
        "\nPASS criterion 12: generate plus evaluate completed with sockets "
        "disabled (zero network operations)"
    )

"""Multi-fact-adjusted retrieval metrics and report aggregation.

A query with c context facts counts as a hit at K only if all c facts
sit inside the top c*K positions.  Reciprocal rank charges each relevant
fact found at position i a cost of floor(i / c); relevant facts missing
from a run of length L are charged floor(L / c) each so truncated runs
cannot score better than full ones.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import DomainError, TkgqaError

LEVEL_ORDER = ("overall", "simple", "medium", "complex")


@dataclass(frozen=True)
class RankingRun:
    query_id: int
    ranked_fact_ids: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.ranked_fact_ids)) != len(self.ranked_fact_ids):
            raise DomainError(f"run for query {self.query_id} has duplicate fact ids")


def hits_at_k(run: RankingRun, relevant: set[int], k: int) -> int:
    """1 iff every relevant fact appears within the top len(relevant)*k."""
    if not relevant:
        raise DomainError("empty relevant set")
    if k < 1:
        raise DomainError("k must be at least 1")
    window = run.ranked_fact_ids[: len(relevant) * k]
    return int(sum(1 for fid in window if fid in relevant) == len(relevant))


def reciprocal_rank(run: RankingRun, relevant: set[int]) -> float:
    if not relevant:
        raise DomainError("empty relevant set")
    c = len(relevant)
    rank = 0
    found = 0
    for position, fid in enumerate(run.ranked_fact_ids):
        if fid in relevant:
            rank += position // c
            found += 1
    rank += (c - found) * (len(run.ranked_fact_ids) // c)
    return 1.0 / (rank + 1)


@dataclass
class EvalReport:
    k_values: tuple[int, ...]
    mrr: dict[str, float]
    hits: dict[int, dict[str, float]]
    counts: dict[str, int]

    def to_json_dict(self) -> dict:
        return {
            "k_values": list(self.k_values),
            "counts": {cell: self.counts.get(cell, 0) for cell in LEVEL_ORDER},
            "mrr": {cell: self.mrr.get(cell) for cell in LEVEL_ORDER},
            "hits": {
                str(k): {cell: self.hits[k].get(cell) for cell in LEVEL_ORDER}
                for k in self.k_values
            },
        }

    def render_table(self) -> str:
        headers = ["metric"] + list(LEVEL_ORDER)
        rows = [["queries"] + [str(self.counts.get(cell, 0)) for cell in LEVEL_ORDER]]

        def fmt(value):
            return "-" if value is None else f"{value:.3f}"

        rows.append(["MRR"] + [fmt(self.mrr.get(cell)) for cell in LEVEL_ORDER])
        for k in self.k_values:
            rows.append(
                [f"Hits@{k}"] + [fmt(self.hits[k].get(cell)) for cell in LEVEL_ORDER]
            )
        widths = [max(len(r[i]) for r in [headers] + rows) for i in range(len(headers))]
        lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
        for row in rows:
            lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)))
        return "\n".join(lines)


def evaluate(
    runs: list[RankingRun],
    records: list[dict],
    k_values: tuple[int, ...] = (1, 3, 10),
) -> EvalReport:
    """Aggregate MRR and Hits@K overall and per level.

    Every run must reference a dataset record; relevant sets come from
    the record's context_fact_ids.  Aggregation follows query-id order,
    so shuffled run files give bit-identical reports.
    """
    by_id = {record["id"]: record for record in records}
    unknown = sorted(run.query_id for run in runs if run.query_id not in by_id)
    if unknown:
        raise TkgqaError(
            f"{len(unknown)} runs reference unknown query ids, e.g. {unknown[:5]}"
        )
    cells: dict[str, list[tuple[float, dict[int, int]]]] = {}
    for run in sorted(runs, key=lambda r: r.query_id):
        record = by_id[run.query_id]
        relevant = set(record["context_fact_ids"])
        rr = reciprocal_rank(run, relevant)
        hits = {k: hits_at_k(run, relevant, k) for k in k_values}
        for cell in ("overall", record["level"]):
            cells.setdefault(cell, []).append((rr, hits))

    mrr: dict[str, float] = {}
    hits_out: dict[int, dict[str, float]] = {k: {} for k in k_values}
    counts: dict[str, int] = {}
    for cell, values in cells.items():
        counts[cell] = len(values)
        mrr[cell] = math.fsum(rr for rr, _ in values) / len(values)
        for k in k_values:
            hits_out[k][cell] = math.fsum(h[k] for _, h in values) / len(values)
    return EvalReport(k_values=tuple(k_values), mrr=mrr, hits=hits_out, counts=counts)


def read_runs(path) -> list[RankingRun]:
    """Load a rankings JSONL file of {query_id, ranked_fact_ids} rows."""
    runs = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
                runs.append(
                    RankingRun(
                        query_id=int(row["query_id"]),
                        ranked_fact_ids=tuple(int(v) for v in row["ranked_fact_ids"]),
                    )
                )
            except (KeyError, ValueError, TypeError) as exc:
                raise TkgqaError(f"bad rankings row at line {line_no}: {exc}") from exc
    return runs


def write_runs(runs: list[RankingRun], path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for run in runs:
            handle.write(
                json.dumps(
                    {"query_id": run.query_id, "ranked_fact_ids": list(run.ranked_fact_ids)}
                )
                + "\n"
            )

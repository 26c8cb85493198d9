"""Command-line entry point: generate, stats, evaluate, verbalize, allen-table.

Exit codes: 0 success, 1 internal error, 2 usage or input error.  All
randomness flows from --seed; nothing touches the network unless an HTTP
paraphrase provider or embedding endpoint is configured explicitly.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .allen import dictionary_rows, export_dictionary
from .categories import AnswerType, Capability, Level
from .config import load_config
from .errors import TkgqaError
from .generator import (
    SPLITS,
    assign_splits,
    dataset_stats,
    generate_pairs,
    read_records,
    write_dataset,
)
from .kg import parse_facts, unify, verbalize
from .manifest import build_manifest, write_manifest
from .metrics import RankingRun, evaluate, read_runs
from .paraphrase import ParaphraseCache, ParaphraseProvider, Paraphraser
from .ranking import cosine_rank, fetch_vectors, prefilter_for, read_vector_file
from .sampler import STREAM_SPLIT, rng_for
from .templates import load_template_bank


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tkgqa",
        description="Temporal-KG question/answer dataset generator and retrieval evaluator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a categorized QA dataset from a fact file")
    gen.add_argument("--facts", required=True, help="fact file (subject|predicate|object|start|end)")
    gen.add_argument("--out", required=True, help="output directory")
    gen.add_argument("--seed", type=int, default=None, help="seed overriding the config")
    gen.add_argument("--config", default=None, help="generator config JSON")
    gen.add_argument("--granularity", default="day", help="time unit (minute..year)")
    gen.add_argument("--paraphrase", choices=["none", "http"], default="none")
    gen.add_argument("--paraphrase-endpoint", default="")
    gen.add_argument("--paraphrase-model", default="")
    gen.add_argument("--paraphrase-cache", default=None, help="paraphrase cache JSONL path")
    gen.add_argument("--threads", type=int, default=None, help="worker pool size")

    stats = sub.add_parser("stats", help="print distribution tables for a dataset")
    stats.add_argument("--dataset", required=True, help="dataset directory or JSONL file")

    ev = sub.add_parser("evaluate", help="score retrieval runs against a dataset")
    ev.add_argument("--qa", required=True, help="dataset directory or JSONL file")
    ev.add_argument("--rankings", default=None, help="rankings JSONL (mode=rankings)")
    ev.add_argument("--query-vectors", default=None)
    ev.add_argument("--fact-vectors", default=None)
    ev.add_argument("--mode", choices=["rankings", "rag", "rag-semantic"], default="rankings")
    ev.add_argument("--k", default="1,3,10", help="comma-separated Hits@K cutoffs")
    ev.add_argument("--facts", default=None, help="fact file (needed for rag-semantic)")
    ev.add_argument("--granularity", default="day")
    ev.add_argument("--prefilter", choices=["predicted", "gold"], default="predicted")
    ev.add_argument("--report", default="eval_report.json", help="report JSON output path")
    ev.add_argument("--embed-endpoint", default=None, help="HTTP embeddings endpoint")
    ev.add_argument("--embed-model", default="")
    ev.add_argument("--threads", type=int, default=None)

    verb = sub.add_parser("verbalize", help="print one text line per fact")
    verb.add_argument("--facts", required=True)
    verb.add_argument("--granularity", default="day")

    table = sub.add_parser("allen-table", help="dump the 26-entry relation dictionary")
    table.add_argument("--out", default=None, help="write TSV here instead of stdout")
    return parser


def _require_file(path_text: str, what: str) -> Path:
    path = Path(path_text)
    if not path.exists():
        raise TkgqaError(f"{what} not found: {path}")
    return path


def cmd_generate(args) -> int:
    facts_path = _require_file(args.facts, "facts file")
    config = load_config(args.config, seed=args.seed)
    kg = unify(parse_facts(facts_path, args.granularity))
    bank = load_template_bank(config.template_bank)
    pairs = generate_pairs(
        kg,
        bank,
        config.sampler,
        config.counts,
        simple_answer_types=config.simple_answer_types,
        enable_negation=config.enable_negation,
        threads=args.threads,
    )
    if args.paraphrase == "http":
        provider = ParaphraseProvider(
            kind="http",
            endpoint_url=args.paraphrase_endpoint,
            model_name=args.paraphrase_model,
        )
        cache = ParaphraseCache(args.paraphrase_cache)
        pairs = Paraphraser(provider, cache=cache).apply_all(pairs)
    assign_splits(pairs, config.split_ratios, rng_for(config.seed, STREAM_SPLIT, 0))

    out_dir = Path(args.out)
    written = []
    try:
        written = write_dataset(pairs, out_dir)
        inputs = [facts_path]
        if args.config:
            inputs.append(Path(args.config))
        if config.template_bank:
            inputs.append(Path(config.template_bank))
        manifest = build_manifest(config.resolved(), config.seed, inputs, written, out_dir)
        write_manifest(manifest, out_dir)
    except Exception:
        for path in written:
            Path(path).unlink(missing_ok=True)
        raise

    stats = dataset_stats([p.to_record() for p in pairs])
    print(f"generated {stats['total']} question/answer pairs into {out_dir}")
    for category in sorted(stats["by_category"]):
        print(f"  {category:<18} {stats['by_category'][category]}")
    return 0


def _print_table(title: str, rows: list[tuple], headers: tuple) -> None:
    print(title)
    table = [tuple(str(v) for v in row) for row in [headers] + rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(headers))]
    for index, row in enumerate(table):
        print("  " + "  ".join(v.ljust(w) for v, w in zip(row, widths)))
        if index == 0:
            print("  " + "  ".join("-" * w for w in widths))
    print()


def cmd_stats(args) -> int:
    dataset = Path(args.dataset)
    if not dataset.exists():
        raise TkgqaError(f"dataset not found: {dataset}")
    records = read_records(dataset)
    stats = dataset_stats(records)

    rows = []
    for level in Level:
        per_split = [stats["by_split_level"][split][level.value] for split in SPLITS]
        rows.append((level.value, *per_split, sum(per_split)))
    rows.append(("total", *[stats["by_split"][s] for s in SPLITS], stats["total"]))
    _print_table("Questions by split", rows, ("level", *SPLITS, "total"))

    _print_table(
        "Temporal capabilities",
        [(cap.value, stats["by_capability"][cap.value]) for cap in Capability],
        ("capability", "count"),
    )
    _print_table(
        "Detailed answer types",
        [(at.value, stats["by_answer_type"][at.value]) for at in AnswerType],
        ("answer type", "count"),
    )
    return 0


def _vectors_for_evaluation(args, records, kg):
    if args.embed_endpoint:
        queries = {r["id"]: r["question"] for r in records}
        facts = {f.id: verbalize(f, kg) for f in kg.facts}
        query_vecs = fetch_vectors(args.embed_endpoint, args.embed_model, queries)
        fact_vecs = fetch_vectors(args.embed_endpoint, args.embed_model, facts)
        return query_vecs, fact_vecs
    if not args.query_vectors or not args.fact_vectors:
        raise TkgqaError(
            "rag modes need --query-vectors and --fact-vectors, or --embed-endpoint"
        )
    return (
        read_vector_file(_require_file(args.query_vectors, "query vector file")),
        read_vector_file(_require_file(args.fact_vectors, "fact vector file")),
    )


def cmd_evaluate(args) -> int:
    qa_path = Path(args.qa)
    if not qa_path.exists():
        raise TkgqaError(f"dataset not found: {qa_path}")
    records = read_records(qa_path)
    try:
        k_values = tuple(sorted({int(v) for v in args.k.split(",") if v.strip()}))
    except ValueError as exc:
        raise TkgqaError(f"bad --k list {args.k!r}: {exc}") from exc
    if not k_values or any(k < 1 for k in k_values):
        raise TkgqaError("--k needs positive integers")

    if args.mode == "rankings":
        if not args.rankings:
            raise TkgqaError("mode=rankings needs --rankings")
        runs = read_runs(_require_file(args.rankings, "rankings file"))
    else:
        kg = None
        if args.mode == "rag-semantic" or args.embed_endpoint:
            if not args.facts:
                raise TkgqaError(f"mode={args.mode} needs --facts")
            kg = unify(parse_facts(_require_file(args.facts, "facts file"), args.granularity))
        query_vecs, fact_vecs = _vectors_for_evaluation(args, records, kg)
        runs = []
        for record in records:
            if record["id"] not in query_vecs:
                raise TkgqaError(f"no query vector for pair {record['id']}")
            prefilter = None
            if args.mode == "rag-semantic":
                prefilter = prefilter_for(record, kg, mode=args.prefilter)
            runs.append(
                cosine_rank(record["id"], query_vecs[record["id"]], fact_vecs, prefilter)
            )

    report = evaluate(runs, records, k_values)
    report_path = Path(args.report)
    report_path.write_text(
        json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    print(report.render_table())
    print(f"\nreport written to {report_path}")
    return 0


def cmd_verbalize(args) -> int:
    kg = unify(parse_facts(_require_file(args.facts, "facts file"), args.granularity))
    for fact in kg.facts:
        print(verbalize(fact, kg))
    return 0


def cmd_allen_table(args) -> int:
    if args.out:
        export_dictionary(args.out)
        print(f"wrote 26 relations to {args.out}")
    else:
        print("key\tkind\tpair_type\tsemantic")
        for row in dictionary_rows():
            print("\t".join(row))
    return 0


_COMMANDS = {
    "generate": cmd_generate,
    "stats": cmd_stats,
    "evaluate": cmd_evaluate,
    "verbalize": cmd_verbalize,
    "allen-table": cmd_allen_table,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except TkgqaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - last-resort boundary
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: index a dump, annotate tables, evaluate against gold."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
from pathlib import Path

from .config import ConfigError, PipelineConfig
from .disambiguation import AnnotationResult, annotate_table
from .evaluation import (
    GoldFormatError,
    load_core_gold,
    load_gold,
    load_predictions,
    score_core_attribute,
    score_entities,
)
from .kg import IndexFormatError, IngestError, KnowledgeGraphIndex, compute_entity_rank, ingest_ntriples
from .structure import NoTextualColumnError
from .tables import TableParseError, parse_table

log = logging.getLogger("rowlink")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A002 - argparse API
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="rowlink", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="build an index artifact from an N-Triples dump")
    p_index.add_argument("dump", help="N-Triples file (.nt, optionally .gz)")
    p_index.add_argument("out", help="output index artifact path")
    p_index.add_argument("--config", help="pipeline config file")

    p_annotate = sub.add_parser("annotate", help="annotate table rows with entities")
    p_annotate.add_argument("index", help="index artifact built by 'rowlink index'")
    p_annotate.add_argument("out", help="output directory")
    p_annotate.add_argument("tables", nargs="+", help="table files (.csv or .json)")
    p_annotate.add_argument("--config", help="pipeline config file")
    p_annotate.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p_annotate.add_argument("--limit-tables", type=int, default=None)
    p_annotate.add_argument(
        "--output-format", choices=("jsonl", "csv", "both"), default="both"
    )

    p_eval = sub.add_parser("evaluate", help="score annotation output against gold")
    p_eval.add_argument("gold", help="gold CSV file or directory")
    p_eval.add_argument("predictions", help="annotations.jsonl/.csv, or tables.json for core mode")
    p_eval.add_argument("--mode", choices=("entities", "core"), default="entities")
    p_eval.add_argument("--index", help="index artifact for gold IRI validity checks")
    p_eval.add_argument("--ignore-none-rows", action="store_true")
    p_eval.add_argument("--report", help="write the machine-readable JSON report here")
    return parser


def _load_config(path: str | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig().validate()
    return PipelineConfig.load(path)


def cmd_index(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    started = time.perf_counter()
    index = ingest_ntriples(
        args.dump,
        entity_prefix=config.entity_iri_prefix,
        excluded_types=config.excluded_type_iris,
    )
    compute_entity_rank(index)
    index.save(args.out)
    elapsed = time.perf_counter() - started
    report = index.report
    assert report is not None
    print(
        f"indexed {report.triples} triples ({report.skipped_lines} lines skipped), "
        f"{report.entities} entities, {report.labels} labels in {elapsed:.1f}s -> {args.out}"
    )
    if report.entities == 0:
        log.warning("index contains no entities")
    return EXIT_OK


def _result_record(result: AnnotationResult) -> dict:
    signals = result.signals
    return {
        "table_id": result.table_id,
        "row": result.row,
        "core_column": result.core_column,
        "entity": result.chosen or "",
        "score": result.score,
        "p_lookup": signals.p_lookup if signals else None,
        "p_direct_type": signals.p_direct_type if signals else None,
        "p_transitive_type": signals.p_transitive_type if signals else None,
        "s_surface": signals.s_surface if signals else None,
        "s_value": signals.s_value if signals else None,
    }


_CSV_COLUMNS = (
    "table_id",
    "row",
    "core_column",
    "entity",
    "score",
    "p_lookup",
    "p_direct_type",
    "p_transitive_type",
    "s_surface",
    "s_value",
)


def _write_outputs(out_dir: Path, records: list[dict], sidecars: list[dict], fmt: str) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    if fmt in ("jsonl", "both"):
        with open(out_dir / "annotations.jsonl", "w", encoding="utf-8") as fh:
            for record in records:
                fh.write(json.dumps(record, sort_keys=True) + "\n")
    if fmt in ("csv", "both"):
        with open(out_dir / "annotations.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(_CSV_COLUMNS)
            for record in records:
                writer.writerow(
                    ["" if record[c] is None else record[c] for c in _CSV_COLUMNS]
                )
    with open(out_dir / "tables.json", "w", encoding="utf-8") as fh:
        json.dump(sidecars, fh, sort_keys=True, indent=2)
        fh.write("\n")


def cmd_annotate(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    index = KnowledgeGraphIndex.load(args.index)
    if config.entity_iri_prefix:
        index.entity_prefix = config.entity_iri_prefix
    index.excluded_types = frozenset(config.excluded_type_iris)
    table_paths = [Path(p) for p in args.tables]
    if args.limit_tables is not None:
        table_paths = table_paths[: args.limit_tables]
    threads = max(1, args.threads)
    records: list[dict] = []
    sidecars: list[dict] = []
    for path in table_paths:
        try:
            table = parse_table(path)
            structure, results = annotate_table(index, table, config=config, threads=threads)
        except (TableParseError, NoTextualColumnError) as exc:
            log.warning("skipping table %s: %s", path, exc)
            sidecars.append({"table_id": path.stem, "error": str(exc)})
            continue
        sidecars.append(
            {
                "table_id": table.id,
                "header_row": structure.header_row,
                "core_column": structure.core_column,
                "n_rows": table.n_rows,
                "n_cols": table.n_cols,
            }
        )
        records.extend(_result_record(r) for r in results)
    _write_outputs(Path(args.out), records, sidecars, args.output_format)
    annotated = sum(1 for r in records if r["entity"])
    print(
        f"annotated {annotated}/{len(records)} rows across "
        f"{sum(1 for s in sidecars if 'error' not in s)}/{len(sidecars)} tables -> {args.out}"
    )
    return EXIT_OK


def _load_core_predictions(path: str | Path) -> dict[str, int]:
    with open(path, encoding="utf-8") as fh:
        sidecars = json.load(fh)
    return {
        s["table_id"]: s["core_column"]
        for s in sidecars
        if "core_column" in s and s["core_column"] is not None
    }


def cmd_evaluate(args: argparse.Namespace) -> int:
    index = KnowledgeGraphIndex.load(args.index) if args.index else None
    if args.mode == "entities":
        gold = load_gold(args.gold, index=index)
        predictions = load_predictions(args.predictions)
        score = score_entities(gold, predictions, ignore_none_rows=args.ignore_none_rows)
    else:
        gold_cols = load_core_gold(args.gold)
        predictions_cols = _load_core_predictions(args.predictions)
        score = score_core_attribute(gold_cols, predictions_cols)
    print(score.summary())
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(score.to_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "index":
            return cmd_index(args)
        if args.command == "annotate":
            return cmd_annotate(args)
        return cmd_evaluate(args)
    except (IngestError, IndexFormatError, ConfigError, GoldFormatError, TableParseError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

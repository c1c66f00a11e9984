"""Scoring of annotation output against gold standards.

Entity annotation is scored with micro-averaged precision / recall / F1 over
pooled counts; core-attribute annotation with per-table accuracy. Gold rows
whose IRI does not exist in the target graph are dropped before counting.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .kg import KnowledgeGraphIndex


class GoldFormatError(Exception):
    """Raised when a gold-standard file cannot be interpreted."""


@dataclass(frozen=True)
class GoldRecord:
    table_id: str
    row: int
    iri: str | None
    valid: bool = True


@dataclass
class EntityScore:
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int
    n_gold_matches: int
    n_predictions: int
    predicted_on_none: int
    unknown_key_predictions: int
    invalid_gold_dropped: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    def summary(self) -> str:
        return (
            f"entities: P={self.precision:.4f} R={self.recall:.4f} F1={self.f1:.4f} "
            f"(tp={self.tp} fp={self.fp} fn={self.fn}; "
            f"gold matches={self.n_gold_matches}, predictions={self.n_predictions}, "
            f"predicted on none={self.predicted_on_none}, "
            f"unknown keys={self.unknown_key_predictions}, "
            f"invalid gold dropped={self.invalid_gold_dropped})"
        )


@dataclass
class CoreAttributeScore:
    accuracy: float
    n_correct: int
    n_tables: int
    n_missing: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    def summary(self) -> str:
        return (
            f"core attribute: accuracy={self.accuracy:.4f} "
            f"({self.n_correct}/{self.n_tables} tables, {self.n_missing} missing predictions)"
        )


def _is_combined_header(row: list[str]) -> bool:
    return [c.strip().lower() for c in row[:3]] == ["table_id", "row_index", "iri"]


def _load_gold_file(path: Path, index: KnowledgeGraphIndex | None) -> list[GoldRecord]:
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row or not any(cell.strip() for cell in row):
                continue
            if lineno == 1 and _is_combined_header(row):
                continue
            if len(row) < 3:
                raise GoldFormatError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
            first = row[0].strip()
            if first.startswith(("http://", "https://")):
                # Per-table shape: iri, key, row_index; the table id is the file stem.
                table_id, iri, row_text = path.stem, first, row[2]
            else:
                table_id, row_text, iri = first, row[1], row[2].strip()
            try:
                row_index = int(row_text.strip())
            except ValueError as exc:
                raise GoldFormatError(f"{path}:{lineno}: bad row index {row_text!r}") from exc
            iri = iri.strip() or None
            valid = True
            if iri is not None and index is not None:
                valid = index.contains_iri(iri)
            records.append(GoldRecord(table_id=table_id, row=row_index, iri=iri, valid=valid))
    return records


def load_gold(path: str | Path, index: KnowledgeGraphIndex | None = None) -> list[GoldRecord]:
    """Load gold records from a CSV file or a directory of per-table CSV files.

    Two shapes are accepted and auto-detected per file: combined rows of
    ``table_id,row_index,iri`` (empty iri means "no entity"), and per-table
    files whose rows are ``iri,key,row_index`` with the table id taken from
    the file name. When an index is supplied, gold IRIs missing from the
    graph are flagged invalid.
    """
    path = Path(path)
    if path.is_dir():
        records = []
        for child in sorted(path.glob("*.csv")):
            records.extend(_load_gold_file(child, index))
    else:
        records = _load_gold_file(path, index)
    seen: set[tuple[str, int]] = set()
    for record in records:
        key = (record.table_id, record.row)
        if key in seen:
            raise GoldFormatError(f"duplicate gold key {key}")
        seen.add(key)
    return records


def _normalize_predictions(
    predicted: Mapping[tuple[str, int], str | None] | Iterable,
) -> dict[tuple[str, int], str | None]:
    if isinstance(predicted, Mapping):
        return dict(predicted)
    result: dict[tuple[str, int], str | None] = {}
    for item in predicted:
        if hasattr(item, "table_id"):
            key, value = (item.table_id, item.row), item.chosen
        else:
            table_id, row, value = item
            key = (table_id, int(row))
        if key in result:
            raise ValueError(f"duplicate prediction for {key}")
        result[key] = value or None
    return result


def score_entities(
    gold: Iterable[GoldRecord],
    predicted: Mapping[tuple[str, int], str | None] | Iterable,
    ignore_none_rows: bool = False,
) -> EntityScore:
    """Micro-averaged precision, recall, and F1 of predicted row entities.

    A prediction matching the gold IRI is a true positive; a differing
    prediction counts both as a false positive and (through the recall
    denominator) a miss of its gold IRI. Predictions on rows whose gold is
    "none" are false positives unless ``ignore_none_rows``. Predictions on
    rows absent from the gold are false positives and reported separately.
    Zero denominators yield 0.
    """
    predictions = _normalize_predictions(predicted)
    gold_map: dict[tuple[str, int], str | None] = {}
    invalid_dropped = 0
    for record in gold:
        if record.iri is not None and not record.valid:
            invalid_dropped += 1
            continue
        gold_map[(record.table_id, record.row)] = record.iri
    tp = fp = 0
    predicted_on_none = 0
    unknown = 0
    n_predictions = 0
    for key in sorted(predictions):
        value = predictions[key]
        if value is None:
            continue
        if key not in gold_map:
            unknown += 1
            fp += 1
            n_predictions += 1
            continue
        expected = gold_map[key]
        if expected is None:
            if ignore_none_rows:
                continue
            predicted_on_none += 1
            fp += 1
        elif value == expected:
            tp += 1
        else:
            fp += 1
        n_predictions += 1
    n_gold_matches = sum(1 for iri in gold_map.values() if iri is not None)
    fn = n_gold_matches - tp
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return EntityScore(
        precision=precision,
        recall=recall,
        f1=f1,
        tp=tp,
        fp=fp,
        fn=fn,
        n_gold_matches=n_gold_matches,
        n_predictions=n_predictions,
        predicted_on_none=predicted_on_none,
        unknown_key_predictions=unknown,
        invalid_gold_dropped=invalid_dropped,
    )


def load_core_gold(path: str | Path) -> dict[str, int]:
    """Load a core-column gold CSV of ``table_id,core_column`` rows."""
    path = Path(path)
    gold: dict[str, int] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row or not any(cell.strip() for cell in row):
                continue
            if lineno == 1 and [c.strip().lower() for c in row[:2]] == ["table_id", "core_column"]:
                continue
            if len(row) < 2:
                raise GoldFormatError(f"{path}:{lineno}: expected 2 columns")
            try:
                gold[row[0].strip()] = int(row[1].strip())
            except ValueError as exc:
                raise GoldFormatError(f"{path}:{lineno}: bad column index {row[1]!r}") from exc
    return gold


def score_core_attribute(
    gold: Mapping[str, int],
    predicted: Mapping[str, int],
) -> CoreAttributeScore:
    """Fraction of gold tables whose predicted core column matches; missing predictions count wrong."""
    correct = 0
    missing = 0
    for table_id, column in gold.items():
        if table_id not in predicted:
            missing += 1
        elif predicted[table_id] == column:
            correct += 1
    n_tables = len(gold)
    accuracy = correct / n_tables if n_tables else 0.0
    return CoreAttributeScore(
        accuracy=accuracy,
        n_correct=correct,
        n_tables=n_tables,
        n_missing=missing,
    )


def load_predictions(path: str | Path) -> dict[tuple[str, int], str | None]:
    """Load predicted entities from an annotation JSONL or CSV output file."""
    path = Path(path)
    predictions: dict[tuple[str, int], str | None] = {}
    if path.suffix == ".jsonl":
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                record = json.loads(line)
                predictions[(record["table_id"], int(record["row"]))] = record["entity"] or None
    else:
        with open(path, newline="", encoding="utf-8") as fh:
            for record in csv.DictReader(fh):
                predictions[(record["table_id"], int(record["row"]))] = record["entity"] or None
    return predictions

"""Table ingestion: CSV / JSON rows-of-strings to a rectangular grid of typed cells."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from .cells import CellType, CellTyper, clean_cell, parse_cell_dtype


class TableParseError(Exception):
    """Raised when an input file cannot be turned into a table."""


@dataclass(frozen=True)
class Cell:
    raw: str
    clean: str
    dtype: CellType


EMPTY_CELL = Cell(raw="", clean="", dtype=CellType.EMPTY)


@dataclass
class Table:
    """A rectangular grid of cleaned, typed cells.

    Short rows are padded on the right with empty cells so every row has
    exactly ``n_cols`` entries.
    """

    id: str
    rows: list[list[Cell]]

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0])

    def column(self, index: int) -> list[Cell]:
        return [row[index] for row in self.rows]


def make_cell(raw: str, typer: CellTyper = parse_cell_dtype) -> Cell:
    clean = clean_cell(raw)
    return Cell(raw=raw, clean=clean, dtype=typer(clean))


def build_table(table_id: str, raw_rows: list[list[str]], typer: CellTyper = parse_cell_dtype) -> Table:
    """Build a Table from raw string rows, cleaning, typing, and padding."""
    if not raw_rows:
        raise TableParseError(f"table {table_id!r} has no rows")
    n_cols = max(len(r) for r in raw_rows)
    if n_cols == 0:
        raise TableParseError(f"table {table_id!r} has no columns")
    rows = []
    for raw_row in raw_rows:
        cells = [make_cell(value, typer) for value in raw_row]
        cells.extend([EMPTY_CELL] * (n_cols - len(cells)))
        rows.append(cells)
    return Table(id=table_id, rows=rows)


def parse_table(path: str | Path, format: str | None = None, typer: CellTyper = parse_cell_dtype) -> Table:
    """Parse a table file into a rectangular Table.

    ``format`` is "csv" (RFC-4180 quoting, comma delimiter) or "json-rows"
    (a JSON array of arrays of strings); when omitted it is inferred from the
    file suffix. The table id is the file stem.
    """
    path = Path(path)
    if format is None:
        format = "json-rows" if path.suffix.lower() == ".json" else "csv"
    if format == "csv":
        raw_rows = _read_csv(path)
    elif format == "json-rows":
        raw_rows = _read_json_rows(path)
    else:
        raise TableParseError(f"unknown table format {format!r}")
    return build_table(path.stem, raw_rows, typer)


def _read_csv(path: Path) -> list[list[str]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                return [list(row) for row in reader]
            except csv.Error as exc:
                raise TableParseError(f"{path}: bad csv record at line {reader.line_num}: {exc}") from exc
    except OSError as exc:
        raise TableParseError(f"{path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise TableParseError(f"{path}: not valid UTF-8: {exc}") from exc


def _read_json_rows(path: Path) -> list[list[str]]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise TableParseError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise TableParseError(f"{path}: invalid json: {exc}") from exc
    if not isinstance(data, list):
        raise TableParseError(f"{path}: expected a json array of rows")
    rows = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or not all(isinstance(v, str) for v in row):
            raise TableParseError(f"{path}: row {i} is not an array of strings")
        rows.append(list(row))
    return rows

"""Structure annotation: header-row detection and core-attribute column selection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .cells import CellType
from .tables import Cell, Table

# Average cleaned-cell length a column must fall inside to be a core candidate.
CORE_LENGTH_MIN = 3.5
CORE_LENGTH_MAX = 200.0

# Majority ties resolve by this precedence.
_DTYPE_PRECEDENCE = (CellType.TEXTUAL, CellType.NUMERICAL, CellType.EMPTY)


class NoTextualColumnError(Exception):
    """No column qualifies as the core attribute; the table is rejected."""


@dataclass
class StructureAnnotation:
    header_row: int | None
    core_column: int
    column_dtypes: list[CellType] = field(default_factory=list)
    uniqueness_scores: list[float] = field(default_factory=list)


def majority_dtype(cells: list[Cell]) -> CellType:
    """Most frequent cell dtype, ties broken textual > numerical > empty."""
    counts = {dtype: 0 for dtype in _DTYPE_PRECEDENCE}
    for cell in cells:
        counts[cell.dtype] += 1
    return max(_DTYPE_PRECEDENCE, key=lambda d: (counts[d], -_DTYPE_PRECEDENCE.index(d)))


def nearest_rank_quantile(values: list[float], q: float) -> float:
    """Empirical nearest-rank quantile: the ceil(q*n)-th smallest value."""
    if not values:
        raise ValueError("quantile of empty sequence")
    ordered = sorted(values)
    rank = max(1, math.ceil(q * len(ordered)))
    return ordered[min(rank, len(ordered)) - 1]


def _row_mean_length(row: list[Cell]) -> float:
    return sum(len(cell.clean) for cell in row) / len(row)


def annotate_header(table: Table) -> int | None:
    """Return 0 if the first row is a header, else None.

    The first row is the only candidate. It is a header when its per-column
    dtype list differs from the majority dtype list of the data rows, or when
    its mean cell length falls strictly below the 0.05 quantile or strictly
    above the 0.95 quantile of the data rows' mean lengths.
    """
    if table.n_rows < 2:
        return None
    data_rows = table.rows[1:]
    majority = [majority_dtype([row[c] for row in data_rows]) for c in range(table.n_cols)]
    candidate = [cell.dtype for cell in table.rows[0]]
    if candidate != majority:
        return 0
    means = [_row_mean_length(row) for row in data_rows]
    m0 = _row_mean_length(table.rows[0])
    if m0 < nearest_rank_quantile(means, 0.05) or m0 > nearest_rank_quantile(means, 0.95):
        return 0
    return None


def column_uniqueness(cells: list[Cell]) -> float:
    """Fraction of distinct non-empty values minus fraction of empty cells."""
    n = len(cells)
    distinct = len({cell.clean for cell in cells if cell.clean})
    empties = sum(1 for cell in cells if cell.dtype is CellType.EMPTY)
    return distinct / n - empties / n


def annotate_core_column(table: Table, header: int | None) -> tuple[int, list[float]]:
    """Pick the core-attribute column and return it with all uniqueness scores.

    Candidates are columns with textual majority dtype over the data rows
    whose mean cleaned-cell length lies in [3.5, 200] (the length window is
    waived for single-row tables). Highest uniqueness wins; ties go to the
    left-most column. Raises NoTextualColumnError when nothing qualifies.
    """
    data_rows = [row for i, row in enumerate(table.rows) if i != header]
    n_data = len(data_rows)
    scores = []
    candidates = []
    for c in range(table.n_cols):
        cells = [row[c] for row in data_rows]
        scores.append(column_uniqueness(cells))
        if majority_dtype(cells) is not CellType.TEXTUAL:
            continue
        if n_data > 1:
            mean_len = sum(len(cell.clean) for cell in cells) / n_data
            if not (CORE_LENGTH_MIN <= mean_len <= CORE_LENGTH_MAX):
                continue
        candidates.append(c)
    if not candidates:
        raise NoTextualColumnError(f"table {table.id!r} has no qualifying textual column")
    best = candidates[0]
    for c in candidates[1:]:
        if scores[c] > scores[best]:
            best = c
    return best, scores


def annotate_structure(table: Table) -> StructureAnnotation:
    """Run header then core-column annotation on a table."""
    header = annotate_header(table)
    core, scores = annotate_core_column(table, header)
    data_rows = [row for i, row in enumerate(table.rows) if i != header]
    dtypes = [majority_dtype([row[c] for row in data_rows]) for c in range(table.n_cols)]
    return StructureAnnotation(
        header_row=header,
        core_column=core,
        column_dtypes=dtypes,
        uniqueness_scores=scores,
    )

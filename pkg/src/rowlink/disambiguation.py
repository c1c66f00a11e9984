"""Candidate disambiguation: five per-candidate signals averaged into a final score.

The signals are the lookup probability (per-query softmax of facet scores,
averaged and renormalized), conformance to the core column's direct-type and
transitive-type distributions, surface similarity to the core cell, and value
matching of the row's other cells against the entity's attribute values.
Type distributions are aggregated at column scope, so annotation runs in
three passes: per-row lookup signals, a table-wide type reduction, then
per-row final scoring.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Mapping

from .candidates import (
    DEFAULT_MAX_PER_QUERY,
    DEFAULT_SURFACE_THRESHOLD,
    RowCandidateSet,
    generate_candidates,
)
from .cells import clean_cell
from .config import PipelineConfig
from .kg import KnowledgeGraphIndex
from .similarity import best_component_similarity
from .structure import StructureAnnotation, annotate_structure
from .tables import Table


@dataclass(frozen=True)
class SignalVector:
    p_lookup: float
    p_direct_type: float
    p_transitive_type: float
    s_surface: float
    s_value: float

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (
            self.p_lookup,
            self.p_direct_type,
            self.p_transitive_type,
            self.s_surface,
            self.s_value,
        )


@dataclass(frozen=True)
class AnnotationResult:
    table_id: str
    row: int
    core_column: int
    chosen: str | None
    score: float
    signals: SignalVector | None


def final_score(signals: SignalVector, weights: Iterable[float] = (1.0,) * 5) -> float:
    """Weighted mean of the five signals; equal weights give the plain average."""
    weights = tuple(weights)
    return sum(w * s for w, s in zip(weights, signals.as_tuple())) / sum(weights)


def softmax(values: Iterable[float], temperature: float = 1.0) -> list[float]:
    """Shift-invariant softmax; empty input gives an empty list."""
    values = list(values)
    if not values:
        return []
    peak = max(values)
    exps = [math.exp((v - peak) / temperature) for v in values]
    total = sum(exps)
    return [e / total for e in exps]


def aggregate_query_probabilities(
    per_query: list[Mapping[str, float]],
    renormalize: bool = True,
) -> dict[str, float]:
    """Mean of per-query probabilities per candidate, optionally renormalized to sum 1.

    A candidate absent from a query contributes 0 for that query; the mean
    divides by the number of issued queries.
    """
    iris = sorted({iri for probs in per_query for iri in probs})
    if not iris:
        return {}
    n = len(per_query)
    means = {iri: sum(probs.get(iri, 0.0) for probs in per_query) / n for iri in iris}
    if renormalize:
        total = sum(means.values())
        if total > 0.0:
            means = {iri: value / total for iri, value in means.items()}
    return means


def signal_lookup(
    candidate_set: RowCandidateSet,
    temperature: float = 1.0,
    renormalize: bool = True,
) -> dict[str, float]:
    """Per-candidate lookup probability from softmaxed facet scores of every query list."""
    per_query: list[dict[str, float]] = []
    for hits in candidate_set.queries:
        probs = softmax([h.facet_score for h in hits], temperature)
        per_query.append({hit.iri: p for hit, p in zip(hits, probs)})
    return aggregate_query_probabilities(per_query, renormalize=renormalize)


def _types_of(
    index: KnowledgeGraphIndex,
    iri: str,
    mode: str,
    excluded: Iterable[str] | None,
) -> set[str]:
    if mode == "direct":
        return index.get_direct_types(iri, excluded)
    if mode == "transitive":
        return index.get_transitive_types(iri, excluded)
    raise ValueError(f"unknown type mode {mode!r}")


def column_type_distribution(
    index: KnowledgeGraphIndex,
    p_lookups: list[Mapping[str, float]],
    mode: str,
    temperature: float = 1.0,
    excluded: Iterable[str] | None = None,
) -> dict[str, float]:
    """Softmax over per-type lookup-probability mass pooled across all rows of the column."""
    masses: dict[str, float] = {}
    for p_lookup in p_lookups:
        for iri in sorted(p_lookup):
            p = p_lookup[iri]
            for t in sorted(_types_of(index, iri, mode, excluded)):
                masses[t] = masses.get(t, 0.0) + p
    if not masses:
        return {}
    types = sorted(masses)
    probs = softmax([masses[t] for t in types], temperature)
    return dict(zip(types, probs))


def signal_type(
    index: KnowledgeGraphIndex,
    candidates: Iterable[str],
    distribution: Mapping[str, float],
    mode: str,
    excluded: Iterable[str] | None = None,
) -> dict[str, float]:
    """Per-candidate type signal: the best column-type probability among its own types.

    Candidates with no types left after exclusion score 0.
    """
    return {
        iri: max(
            (distribution.get(t, 0.0) for t in _types_of(index, iri, mode, excluded)),
            default=0.0,
        )
        for iri in candidates
    }


def signal_value_match(
    index: KnowledgeGraphIndex,
    iri: str,
    context_values: list[str],
    attribute_cache: dict[str, list[str]] | None = None,
) -> float:
    """Mean over context cells of the best similarity to any attribute value.

    ``context_values`` are the cleaned non-core non-empty cells of the row;
    an empty list is a vacuous match (1.0). Each cell scores the maximum of
    the four similarity components against its closest attribute value, so
    token order and duplication in attribute text are forgiven.
    """
    if not context_values:
        return 1.0
    if attribute_cache is not None and iri in attribute_cache:
        attributes = attribute_cache[iri]
    else:
        attributes = [clean_cell(v) for v in index.get_attribute_values(iri)]
        if attribute_cache is not None:
            attribute_cache[iri] = attributes
    total = 0.0
    for cell in context_values:
        best = 0.0
        for attribute in attributes:
            best = max(best, best_component_similarity(attribute, cell, clean=False))
            if best == 1.0:
                break
        total += best
    return total / len(context_values)


@dataclass
class _RowState:
    row: int
    candidate_set: RowCandidateSet
    p_lookup: dict[str, float]
    s_value: dict[str, float]


class TableAnnotator:
    """Drives the three disambiguation passes over one table against one index."""

    def __init__(
        self,
        index: KnowledgeGraphIndex,
        table: Table,
        config: PipelineConfig | None = None,
        structure: StructureAnnotation | None = None,
    ) -> None:
        self.index = index
        self.table = table
        self.config = config or PipelineConfig()
        self.structure = structure or annotate_structure(table)
        self._excluded = frozenset(self.config.excluded_type_iris)
        self._states: dict[int, _RowState] | None = None
        self._direct_dist: dict[str, float] = {}
        self._transitive_dist: dict[str, float] = {}

    def data_rows(self) -> list[int]:
        return [i for i in range(self.table.n_rows) if i != self.structure.header_row]

    def _context_values(self, row: int) -> list[str]:
        cells = self.table.rows[row]
        return [
            cell.clean
            for col, cell in enumerate(cells)
            if col != self.structure.core_column and cell.clean
        ]

    def _build_row_state(self, row: int) -> _RowState:
        cfg = self.config
        cset = generate_candidates(
            self.index,
            self.table,
            self.structure,
            row,
            max_per_query=cfg.max_candidates_per_query,
            surface_threshold=cfg.surface_threshold,
            text_weight=cfg.text_weight,
        )
        p_lookup = signal_lookup(
            cset,
            temperature=cfg.softmax_temperature,
            renormalize=cfg.renormalize_lookup,
        )
        context = self._context_values(row)
        attribute_cache: dict[str, list[str]] = {}
        s_value = {
            iri: signal_value_match(self.index, iri, context, attribute_cache)
            for iri in cset.candidates
        }
        return _RowState(row=row, candidate_set=cset, p_lookup=p_lookup, s_value=s_value)

    def prepare(self, threads: int = 1) -> None:
        """Run passes 1 and 2: per-row candidate signals, then the column type reduction."""
        if self._states is not None:
            return
        rows = self.data_rows()
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                states = list(pool.map(self._build_row_state, rows))
        else:
            states = [self._build_row_state(r) for r in rows]
        self._states = {state.row: state for state in states}
        p_lookups = [state.p_lookup for state in states]
        cfg = self.config
        self._direct_dist = column_type_distribution(
            self.index, p_lookups, "direct", cfg.softmax_temperature, self._excluded
        )
        self._transitive_dist = column_type_distribution(
            self.index, p_lookups, "transitive", cfg.softmax_temperature, self._excluded
        )

    def annotate_row(self, row: int) -> AnnotationResult:
        """Final pass for one data row: average the five signals and pick the argmax."""
        self.prepare()
        assert self._states is not None
        state = self._states[row]
        empty = AnnotationResult(
            table_id=self.table.id,
            row=row,
            core_column=self.structure.core_column,
            chosen=None,
            score=0.0,
            signals=None,
        )
        candidates = state.candidate_set.candidates
        if not candidates:
            return empty
        p_direct = signal_type(self.index, candidates, self._direct_dist, "direct", self._excluded)
        p_transitive = signal_type(
            self.index, candidates, self._transitive_dist, "transitive", self._excluded
        )
        threshold = self.config.value_match_threshold
        survivors = [iri for iri in candidates if state.s_value[iri] >= threshold]
        if not survivors:
            # Value matching is skipped rather than leaving the row empty.
            survivors = candidates
        weights = self.config.signal_weights
        best_iri: str | None = None
        best_score = 0.0
        best_vector: SignalVector | None = None
        for iri in survivors:
            vector = SignalVector(
                p_lookup=state.p_lookup.get(iri, 0.0),
                p_direct_type=p_direct[iri],
                p_transitive_type=p_transitive[iri],
                s_surface=state.candidate_set.similarity[iri],
                s_value=state.s_value[iri],
            )
            score = final_score(vector, weights)
            if best_iri is None or score > best_score:
                best_iri, best_score, best_vector = iri, score, vector
        return AnnotationResult(
            table_id=self.table.id,
            row=row,
            core_column=self.structure.core_column,
            chosen=best_iri,
            score=best_score,
            signals=best_vector,
        )

    def annotate_all(self, threads: int = 1) -> list[AnnotationResult]:
        self.prepare(threads=threads)
        rows = self.data_rows()
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                return list(pool.map(self.annotate_row, rows))
        return [self.annotate_row(row) for row in rows]


def annotate_table(
    index: KnowledgeGraphIndex,
    table: Table,
    config: PipelineConfig | None = None,
    structure: StructureAnnotation | None = None,
    threads: int = 1,
) -> tuple[StructureAnnotation, list[AnnotationResult]]:
    """Annotate every data row of a table; returns the structure and the results."""
    annotator = TableAnnotator(index, table, config=config, structure=structure)
    return annotator.structure, annotator.annotate_all(threads=threads)

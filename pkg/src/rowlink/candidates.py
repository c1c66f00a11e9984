"""Per-row entity candidate generation: paired-cell lookups plus surface filtering."""

from __future__ import annotations

from dataclasses import dataclass, field

from .kg import DEFAULT_TEXT_WEIGHT, FacetHit, KnowledgeGraphIndex
from .similarity import aggregate_similarity
from .structure import StructureAnnotation
from .tables import Table

DEFAULT_MAX_PER_QUERY = 3
DEFAULT_SURFACE_THRESHOLD = 0.8


@dataclass
class RowCandidateSet:
    """Surviving lookup hits for one table row.

    ``queries`` holds one ranked hit list per issued query (the core-cell
    lookup first, then one per non-empty context cell), already surface
    filtered and truncated. ``similarity`` maps each surviving IRI to its
    best-label aggregate similarity against the core cell.
    """

    row: int
    core_text: str
    queries: list[list[FacetHit]] = field(default_factory=list)
    similarity: dict[str, float] = field(default_factory=dict)

    @property
    def candidates(self) -> list[str]:
        return sorted(self.similarity)

    @property
    def n_queries(self) -> int:
        return len(self.queries)


def best_label_similarity(index: KnowledgeGraphIndex, iri: str, core_clean: str) -> float:
    """Aggregate similarity between the core cell and the entity's most favorable label."""
    best = 0.0
    for label in index.labels_of(iri):
        best = max(best, aggregate_similarity(label, core_clean))
        if best == 1.0:
            break
    return best


def generate_candidates(
    index: KnowledgeGraphIndex,
    table: Table,
    structure: StructureAnnotation,
    row: int,
    max_per_query: int = DEFAULT_MAX_PER_QUERY,
    surface_threshold: float = DEFAULT_SURFACE_THRESHOLD,
    text_weight: float = DEFAULT_TEXT_WEIGHT,
) -> RowCandidateSet:
    """Run the row's lookups and keep candidates that survive surface filtering.

    One core-cell lookup plus one paired lookup per other non-empty cell in
    the row; every hit list is filtered to aggregate similarity >=
    ``surface_threshold`` first and then truncated to ``max_per_query``.
    An empty core cell produces an empty candidate set.
    """
    cells = table.rows[row]
    core = cells[structure.core_column].clean
    result = RowCandidateSet(row=row, core_text=core)
    if not core:
        return result
    hit_lists = [index.one_cell_lookup(core, limit=None, text_weight=text_weight)]
    for col, cell in enumerate(cells):
        if col == structure.core_column or not cell.clean:
            continue
        hit_lists.append(
            index.two_cell_lookup(core, cell.clean, limit=None, text_weight=text_weight)
        )
    similarity_cache: dict[str, float] = {}
    for hits in hit_lists:
        kept = []
        for hit in hits:
            sim = similarity_cache.get(hit.iri)
            if sim is None:
                sim = best_label_similarity(index, hit.iri, core)
                similarity_cache[hit.iri] = sim
            if sim >= surface_threshold:
                kept.append(hit)
                if len(kept) == max_per_query:
                    break
        result.queries.append(kept)
    for hits in result.queries:
        for hit in hits:
            result.similarity[hit.iri] = similarity_cache[hit.iri]
    result.similarity = {iri: result.similarity[iri] for iri in sorted(result.similarity)}
    return result

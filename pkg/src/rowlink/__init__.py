"""rowlink: annotate rows of relational tables with knowledge-graph entities."""

from .cells import CellType, clean_cell, parse_cell_dtype, tokenize
from .candidates import RowCandidateSet, best_label_similarity, generate_candidates
from .config import ConfigError, PipelineConfig
from .disambiguation import (
    AnnotationResult,
    SignalVector,
    TableAnnotator,
    annotate_table,
    column_type_distribution,
    final_score,
    signal_lookup,
    signal_type,
    signal_value_match,
    softmax,
)
from .evaluation import (
    CoreAttributeScore,
    EntityScore,
    GoldFormatError,
    GoldRecord,
    load_core_gold,
    load_gold,
    load_predictions,
    score_core_attribute,
    score_entities,
)
from .kg import (
    DEFAULT_EXCLUDED_TYPES,
    EntityRecord,
    FacetHit,
    IndexFormatError,
    IngestError,
    IngestReport,
    KnowledgeGraphIndex,
    Triple,
    compute_entity_rank,
    ingest_ntriples,
    parse_ntriples_line,
)
from .similarity import (
    SimilaritySuite,
    aggregate_similarity,
    best_component_similarity,
    levenshtein,
    partial_ratio,
    ratio,
    similarity_suite,
    token_set_ratio,
    token_sort_ratio,
)
from .structure import (
    NoTextualColumnError,
    StructureAnnotation,
    annotate_core_column,
    annotate_header,
    annotate_structure,
)
from .tables import Cell, Table, TableParseError, build_table, parse_table

__version__ = "0.1.0"

__all__ = [
    "AnnotationResult",
    "Cell",
    "CellType",
    "ConfigError",
    "CoreAttributeScore",
    "DEFAULT_EXCLUDED_TYPES",
    "EntityRecord",
    "EntityScore",
    "FacetHit",
    "GoldFormatError",
    "GoldRecord",
    "IndexFormatError",
    "IngestError",
    "IngestReport",
    "KnowledgeGraphIndex",
    "NoTextualColumnError",
    "PipelineConfig",
    "RowCandidateSet",
    "SignalVector",
    "SimilaritySuite",
    "StructureAnnotation",
    "Table",
    "TableAnnotator",
    "TableParseError",
    "Triple",
    "aggregate_similarity",
    "annotate_core_column",
    "annotate_header",
    "annotate_structure",
    "annotate_table",
    "best_component_similarity",
    "best_label_similarity",
    "build_table",
    "clean_cell",
    "column_type_distribution",
    "compute_entity_rank",
    "final_score",
    "generate_candidates",
    "ingest_ntriples",
    "levenshtein",
    "load_core_gold",
    "load_gold",
    "load_predictions",
    "parse_cell_dtype",
    "parse_ntriples_line",
    "parse_table",
    "partial_ratio",
    "ratio",
    "score_core_attribute",
    "score_entities",
    "signal_lookup",
    "signal_type",
    "signal_value_match",
    "similarity_suite",
    "softmax",
    "token_set_ratio",
    "token_sort_ratio",
]

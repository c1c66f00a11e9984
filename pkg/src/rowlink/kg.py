"""In-memory knowledge-graph index over an N-Triples dump.

Ingestion collects triples, entity labels, type and subclass edges, and
link counts. The index answers token-AND label lookups ranked by a facet
score (text hit weighted at 0.3 plus a min-max-scaled link rank), restricts
them with a second cell's text through one- or two-hop neighbour literals,
and serves type closures and attribute values for disambiguation.

The build phase is single-writer; afterwards the index is treated as
immutable and every query is a pure read.
"""

from __future__ import annotations

import gzip
import math
import pickle
import struct
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .cells import tokenize

RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label"
RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
RDFS_SUBCLASSOF = "http://www.w3.org/2000/01/rdf-schema#subClassOf"

# Classes too generic to help disambiguation; overridable per index or call.
DEFAULT_EXCLUDED_TYPES = frozenset(
    {
        "http://www.w3.org/2002/07/owl#Thing",
        "http://dbpedia.org/ontology/Agent",
    }
)

DISAMBIGUATION_SUFFIX = "_(disambiguation)"

DEFAULT_TEXT_WEIGHT = 0.3

# Predicates that describe an entity rather than link it; excluded from
# inbound/outbound link counts.
_NON_LINK_PREDICATES = frozenset({RDFS_LABEL, RDF_TYPE})


class IngestError(Exception):
    """The dump file could not be read at all."""


class IndexFormatError(Exception):
    """A persisted index has the wrong magic header or format version."""


@dataclass(frozen=True, slots=True)
class Triple:
    subject: str
    predicate: str
    object: str
    object_is_iri: bool


@dataclass(frozen=True, slots=True)
class FacetHit:
    iri: str
    text_hit: float
    facet_score: float


@dataclass(frozen=True, slots=True)
class EntityRecord:
    iri: str
    labels: frozenset[str]
    direct_types: frozenset[str]
    transitive_types: frozenset[str]
    inbound_count: int
    outbound_count: int
    rank: float


@dataclass
class IngestReport:
    path: str
    triples: int = 0
    skipped_lines: int = 0
    entities: int = 0
    labels: int = 0


_SIMPLE_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


def _unescape_literal(s: str) -> str:
    if "\\" not in s:
        return s
    out = []
    i = 0
    n = len(s)
    while i < n:
        c = s[i]
        if c != "\\":
            out.append(c)
            i += 1
            continue
        if i + 1 >= n:
            raise ValueError("dangling escape")
        e = s[i + 1]
        if e == "u":
            out.append(chr(int(s[i + 2 : i + 6], 16)))
            i += 6
        elif e == "U":
            out.append(chr(int(s[i + 2 : i + 10], 16)))
            i += 10
        elif e in _SIMPLE_ESCAPES:
            out.append(_SIMPLE_ESCAPES[e])
            i += 2
        else:
            raise ValueError(f"bad escape \\{e}")
    return "".join(out)


def _skip_ws(s: str, pos: int) -> int:
    while pos < len(s) and s[pos] in " \t":
        pos += 1
    return pos


def _parse_iri_term(s: str, pos: int) -> tuple[str, int]:
    pos = _skip_ws(s, pos)
    if pos >= len(s) or s[pos] != "<":
        raise ValueError("expected IRI")
    end = s.find(">", pos)
    if end < 0:
        raise ValueError("unterminated IRI")
    return s[pos + 1 : end], end + 1


def _parse_object_term(s: str, pos: int) -> tuple[str, bool, int]:
    pos = _skip_ws(s, pos)
    if pos >= len(s):
        raise ValueError("missing object")
    if s[pos] == "<":
        iri, pos = _parse_iri_term(s, pos)
        return iri, True, pos
    if s[pos] != '"':
        raise ValueError("object must be an IRI or a literal")
    i = pos + 1
    n = len(s)
    while i < n:
        c = s[i]
        if c == "\\":
            i += 2
            continue
        if c == '"':
            break
        i += 1
    if i >= n:
        raise ValueError("unterminated literal")
    literal = _unescape_literal(s[pos + 1 : i])
    pos = i + 1
    # Language and datatype tags are stripped to keep the plain text.
    if pos < n and s[pos] == "@":
        pos += 1
        start = pos
        while pos < n and (s[pos].isalnum() or s[pos] == "-"):
            pos += 1
        if pos == start:
            raise ValueError("empty language tag")
    elif pos + 1 < n and s[pos : pos + 2] == "^^":
        _, pos = _parse_iri_term(s, pos + 2)
    return literal, False, pos


def parse_ntriples_line(line: str) -> Triple | None:
    """Parse one N-Triples line; None for blank/comment lines, ValueError if malformed."""
    s = line.strip()
    if not s or s[0] == "#":
        return None
    if s[-1] != ".":
        raise ValueError("missing terminal '.'")
    s = s[:-1].rstrip()
    subject, pos = _parse_iri_term(s, 0)
    predicate, pos = _parse_iri_term(s, pos)
    obj, is_iri, pos = _parse_object_term(s, pos)
    if s[pos:].strip():
        raise ValueError("trailing content after object")
    if "://" not in subject:
        raise ValueError("subject is not an absolute IRI")
    if "://" not in predicate:
        raise ValueError("predicate is not an absolute IRI")
    return Triple(
        sys.intern(subject),
        sys.intern(predicate),
        sys.intern(obj) if is_iri else obj,
        is_iri,
    )


class KnowledgeGraphIndex:
    """Immutable-after-build triple store with a label inverted index."""

    FORMAT_MAGIC = b"RLKGIDX\x00"
    FORMAT_VERSION = 1

    def __init__(
        self,
        entity_prefix: str = "",
        excluded_types: Iterable[str] = DEFAULT_EXCLUDED_TYPES,
    ) -> None:
        self.entity_prefix = entity_prefix
        self.excluded_types = frozenset(excluded_types)
        self.triples: list[Triple] = []
        self.report: IngestReport | None = None
        # entity iri -> indices into self.triples, in ingestion order
        self._subjects: dict[str, list[int]] = {}
        self._labels: dict[str, list[str]] = {}
        self._label_token_sets: dict[str, list[frozenset[str]]] = {}
        self._direct_types: dict[str, list[str]] = {}
        self._subclass: dict[str, list[str]] = {}
        self._in_counts: dict[str, int] = {}
        self._out_counts: dict[str, int] = {}
        self._ranks: dict[str, float] = {}
        self._postings: dict[str, list[tuple[str, float]]] = {}
        self._iri_nodes: set[str] = set()
        # pure-read memo caches populated lazily during queries
        self._posting_iris: dict[str, frozenset[str]] = {}
        self._literal_tokens: dict[str, frozenset[str]] = {}
        self._class_closures: dict[str, frozenset[str]] = {}

    # -- build ---------------------------------------------------------

    @classmethod
    def from_triples(
        cls,
        triples: Iterable[Triple],
        entity_prefix: str = "",
        excluded_types: Iterable[str] = DEFAULT_EXCLUDED_TYPES,
    ) -> "KnowledgeGraphIndex":
        index = cls(entity_prefix=entity_prefix, excluded_types=excluded_types)
        for triple in triples:
            index._add(triple)
        index._finalize()
        return index

    def _add(self, t: Triple) -> None:
        idx = len(self.triples)
        self.triples.append(t)
        self._subjects.setdefault(t.subject, []).append(idx)
        self._iri_nodes.add(t.subject)
        self._iri_nodes.add(t.predicate)
        if t.object_is_iri:
            self._iri_nodes.add(t.object)
        if t.predicate == RDFS_LABEL and not t.object_is_iri:
            labels = self._labels.setdefault(t.subject, [])
            if t.object not in labels:
                labels.append(t.object)
        elif t.predicate == RDF_TYPE and t.object_is_iri:
            types = self._direct_types.setdefault(t.subject, [])
            if t.object not in types:
                types.append(t.object)
        elif t.predicate == RDFS_SUBCLASSOF and t.object_is_iri:
            supers = self._subclass.setdefault(t.subject, [])
            if t.object not in supers:
                supers.append(t.object)
        if t.object_is_iri and t.predicate not in _NON_LINK_PREDICATES:
            self._out_counts[t.subject] = self._out_counts.get(t.subject, 0) + 1
            self._in_counts[t.object] = self._in_counts.get(t.object, 0) + 1

    def _finalize(self) -> None:
        postings: dict[str, dict[str, float]] = {}
        for iri in self._subjects:
            token_sets = []
            for label in self._labels.get(iri, ()):
                tokens = frozenset(tokenize(label))
                if not tokens:
                    continue
                token_sets.append(tokens)
                contribution = 1.0 / len(tokens)
                for token in tokens:
                    per_token = postings.setdefault(token, {})
                    if contribution > per_token.get(iri, 0.0):
                        per_token[iri] = contribution
            if token_sets:
                self._label_token_sets[iri] = token_sets
            self._ranks.setdefault(iri, 0.0)
        self._postings = {
            token: sorted(per_token.items()) for token, per_token in sorted(postings.items())
        }

    # -- stats ---------------------------------------------------------

    @property
    def n_triples(self) -> int:
        return len(self.triples)

    @property
    def n_entities(self) -> int:
        return len(self._subjects)

    @property
    def n_labels(self) -> int:
        return sum(len(v) for v in self._labels.values())

    def entity_iris(self) -> Iterator[str]:
        return iter(self._subjects)

    def contains_iri(self, iri: str) -> bool:
        """True when the IRI occurs anywhere in the graph (subject, predicate, or object)."""
        return iri in self._iri_nodes

    def labels_of(self, iri: str) -> list[str]:
        return list(self._labels.get(iri, ()))

    def rank_of(self, iri: str) -> float:
        return self._ranks.get(iri, 0.0)

    def link_counts(self, iri: str) -> tuple[int, int]:
        return self._in_counts.get(iri, 0), self._out_counts.get(iri, 0)

    def entity(self, iri: str) -> EntityRecord | None:
        if iri not in self._subjects:
            return None
        inbound, outbound = self.link_counts(iri)
        return EntityRecord(
            iri=iri,
            labels=frozenset(self._labels.get(iri, ())),
            direct_types=frozenset(self.get_direct_types(iri)),
            transitive_types=frozenset(self.get_transitive_types(iri)),
            inbound_count=inbound,
            outbound_count=outbound,
            rank=self.rank_of(iri),
        )

    def entities(self) -> Iterator[EntityRecord]:
        for iri in self._subjects:
            record = self.entity(iri)
            assert record is not None
            yield record

    # -- lookups -------------------------------------------------------

    def _posting_iri_set(self, token: str) -> frozenset[str]:
        cached = self._posting_iris.get(token)
        if cached is None:
            cached = frozenset(iri for iri, _ in self._postings.get(token, ()))
            self._posting_iris[token] = cached
        return cached

    def _text_hit(self, iri: str, query_tokens: frozenset[str]) -> float | None:
        # Best matching label = the qualifying label with fewest distinct tokens.
        best = None
        for tokens in self._label_token_sets.get(iri, ()):
            if query_tokens <= tokens and (best is None or len(tokens) < best):
                best = len(tokens)
        if best is None:
            return None
        return len(query_tokens) / best

    def _eligible(self, iri: str) -> bool:
        if self.entity_prefix and not iri.startswith(self.entity_prefix):
            return False
        local = iri.rsplit("/", 1)[-1]
        return not local.endswith(DISAMBIGUATION_SUFFIX)

    def one_cell_lookup(
        self,
        text: str,
        limit: int | None = None,
        text_weight: float = DEFAULT_TEXT_WEIGHT,
    ) -> list[FacetHit]:
        """Entities with a label containing every query token, best facet score first.

        The facet score is ``text_hit * text_weight + rank``. Ties break on
        ascending IRI. Empty-after-normalization text yields no hits.
        """
        query_tokens = frozenset(tokenize(text))
        if not query_tokens:
            return []
        candidates: frozenset[str] | None = None
        for token in sorted(query_tokens, key=lambda t: len(self._postings.get(t, ()))):
            iris = self._posting_iri_set(token)
            candidates = iris if candidates is None else candidates & iris
            if not candidates:
                return []
        assert candidates is not None
        hits = []
        for iri in candidates:
            if not self._eligible(iri):
                continue
            text_hit = self._text_hit(iri, query_tokens)
            if text_hit is None:
                continue
            hits.append(
                FacetHit(
                    iri=iri,
                    text_hit=text_hit,
                    facet_score=text_hit * text_weight + self._ranks.get(iri, 0.0),
                )
            )
        hits.sort(key=lambda h: (-h.facet_score, h.iri))
        return hits if limit is None else hits[:limit]

    def _literal_token_set(self, literal: str) -> frozenset[str]:
        cached = self._literal_tokens.get(literal)
        if cached is None:
            cached = frozenset(tokenize(literal))
            self._literal_tokens[literal] = cached
        return cached

    def _context_matches(self, iri: str, context_tokens: frozenset[str]) -> bool:
        # One hop: a literal object of the entity contains all context tokens.
        # Two hops: an IRI object has such a literal among its own objects.
        for ti in self._subjects.get(iri, ()):
            t = self.triples[ti]
            if t.object_is_iri:
                for tj in self._subjects.get(t.object, ()):
                    t2 = self.triples[tj]
                    if not t2.object_is_iri and context_tokens <= self._literal_token_set(t2.object):
                        return True
            elif context_tokens <= self._literal_token_set(t.object):
                return True
        return False

    def two_cell_lookup(
        self,
        core_text: str,
        context_text: str,
        limit: int | None = None,
        text_weight: float = DEFAULT_TEXT_WEIGHT,
    ) -> list[FacetHit]:
        """One-cell hits restricted to entities related to text matching the context cell."""
        context_tokens = frozenset(tokenize(context_text))
        if not context_tokens:
            return []
        hits = [
            h
            for h in self.one_cell_lookup(core_text, limit=None, text_weight=text_weight)
            if self._context_matches(h.iri, context_tokens)
        ]
        return hits if limit is None else hits[:limit]

    # -- types and attributes -------------------------------------------

    def _class_reach(self, cls: str) -> frozenset[str]:
        cached = self._class_closures.get(cls)
        if cached is None:
            seen = {cls}
            stack = [cls]
            while stack:
                for parent in self._subclass.get(stack.pop(), ()):
                    if parent not in seen:
                        seen.add(parent)
                        stack.append(parent)
            cached = frozenset(seen)
            self._class_closures[cls] = cached
        return cached

    def get_direct_types(self, iri: str, excluded: Iterable[str] | None = None) -> set[str]:
        excluded_set = self.excluded_types if excluded is None else frozenset(excluded)
        return {t for t in self._direct_types.get(iri, ()) if t not in excluded_set}

    def get_transitive_types(self, iri: str, excluded: Iterable[str] | None = None) -> set[str]:
        """Subclass closure of the entity's direct types, minus the excluded classes."""
        excluded_set = self.excluded_types if excluded is None else frozenset(excluded)
        closure: set[str] = set()
        for direct in self._direct_types.get(iri, ()):
            closure |= self._class_reach(direct)
        return closure - excluded_set

    def get_attribute_values(self, iri: str) -> list[str]:
        """Literal objects of the entity plus labels of its IRI objects, in triple order."""
        values: list[str] = []
        for ti in self._subjects.get(iri, ()):
            t = self.triples[ti]
            if t.object_is_iri:
                values.extend(self._labels.get(t.object, ()))
            else:
                values.append(t.object)
        return values

    # -- persistence -----------------------------------------------------

    def save(self, path: str | Path) -> None:
        """Write the index as a versioned binary artifact (magic + version + payload)."""
        payload = {
            "entity_prefix": self.entity_prefix,
            "excluded_types": sorted(self.excluded_types),
            "triples": [(t.subject, t.predicate, t.object, t.object_is_iri) for t in self.triples],
            "ranks": [(iri, self._ranks[iri]) for iri in self._subjects],
            "report": None
            if self.report is None
            else (
                self.report.path,
                self.report.triples,
                self.report.skipped_lines,
                self.report.entities,
                self.report.labels,
            ),
        }
        with open(path, "wb") as fh:
            fh.write(self.FORMAT_MAGIC)
            fh.write(struct.pack("<I", self.FORMAT_VERSION))
            fh.write(pickle.dumps(payload, protocol=4))

    @classmethod
    def load(cls, path: str | Path) -> "KnowledgeGraphIndex":
        """Load a persisted index; raises IndexFormatError on magic/version mismatch."""
        try:
            with open(path, "rb") as fh:
                blob = fh.read()
        except OSError as exc:
            raise IndexFormatError(f"cannot read index {path}: {exc}") from exc
        header = len(cls.FORMAT_MAGIC)
        if blob[:header] != cls.FORMAT_MAGIC:
            raise IndexFormatError(f"{path} is not a rowlink index (bad magic header)")
        (version,) = struct.unpack("<I", blob[header : header + 4])
        if version != cls.FORMAT_VERSION:
            raise IndexFormatError(
                f"{path} has index format version {version}, expected {cls.FORMAT_VERSION}"
            )
        payload = pickle.loads(blob[header + 4 :])
        index = cls.from_triples(
            (
                Triple(sys.intern(s), sys.intern(p), sys.intern(o) if is_iri else o, is_iri)
                for s, p, o, is_iri in payload["triples"]
            ),
            entity_prefix=payload["entity_prefix"],
            excluded_types=payload["excluded_types"],
        )
        index._ranks.update(payload["ranks"])
        if payload["report"] is not None:
            index.report = IngestReport(*payload["report"])
        return index


def ingest_ntriples(
    path: str | Path,
    entity_prefix: str = "",
    excluded_types: Iterable[str] = DEFAULT_EXCLUDED_TYPES,
) -> KnowledgeGraphIndex:
    """Ingest an N-Triples file (gzip-compressed if suffixed .gz) into an index.

    Malformed lines are skipped and tallied in the ingest report; an unreadable
    file raises IngestError.
    """
    path = Path(path)
    report = IngestReport(path=str(path))
    index = KnowledgeGraphIndex(entity_prefix=entity_prefix, excluded_types=excluded_types)
    opener = gzip.open if path.suffix == ".gz" else open
    try:
        with opener(path, "rt", encoding="utf-8", errors="replace") as fh:
            for line in fh:
                try:
                    triple = parse_ntriples_line(line)
                except ValueError:
                    report.skipped_lines += 1
                    continue
                if triple is not None:
                    index._add(triple)
                    report.triples += 1
    except OSError as exc:
        raise IngestError(f"cannot read dump {path}: {exc}") from exc
    index._finalize()
    report.entities = index.n_entities
    report.labels = index.n_labels
    index.report = report
    return index


def compute_entity_rank(index: KnowledgeGraphIndex) -> KnowledgeGraphIndex:
    """Min-max scale ln(1+inbound) + ln(1+outbound) over all entities into [0, 1].

    All ranks are 0 when every entity has the same raw score.
    """
    iris = list(index.entity_iris())
    if not iris:
        return index
    raws = []
    for iri in iris:
        inbound, outbound = index.link_counts(iri)
        raws.append(math.log1p(inbound) + math.log1p(outbound))
    lo = min(raws)
    hi = max(raws)
    if hi == lo:
        index._ranks = {iri: 0.0 for iri in iris}
    else:
        span = hi - lo
        index._ranks = {iri: (raw - lo) / span for iri, raw in zip(iris, raws)}
    return index

"""Levenshtein-based string similarities used for surface filtering and value matching.

All four measures are self-contained reconstructions of the classic fuzzy
ratios, pinned here so results are reproducible bit for bit. Each returns a
float in [0, 1]; 1.0 means the strings are equal (under the measure's own
notion of equality).
"""

from __future__ import annotations

from dataclasses import dataclass

from .cells import clean_cell


def levenshtein(a: str, b: str) -> int:
    """Minimum number of single-character edits turning ``a`` into ``b``."""
    if a == b:
        return 0
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    prev = list(range(lb + 1))
    for i in range(la):
        ca = a[i]
        cur = [i + 1]
        append = cur.append
        for j in range(lb):
            c = prev[j]
            if ca != b[j]:
                c = min(c, prev[j + 1], cur[j]) + 1
            append(c)
        prev = cur
    return prev[-1]


def ratio(a: str, b: str) -> float:
    """Plain edit-distance similarity: 1 - lev(a, b) / max(|a|, |b|).

    Two empty strings are identical, hence 1.0.
    """
    if not a and not b:
        return 1.0
    return 1.0 - levenshtein(a, b) / max(len(a), len(b))


def partial_ratio(a: str, b: str) -> float:
    """Best ratio between the shorter string and any equal-length window of the longer.

    Returns 1.0 when the shorter string is empty.
    """
    shorter, longer = (a, b) if len(a) <= len(b) else (b, a)
    m = len(shorter)
    if m == 0:
        return 1.0
    best = 0.0
    for i in range(len(longer) - m + 1):
        best = max(best, ratio(shorter, longer[i : i + m]))
        if best == 1.0:
            break
    return best


def token_sort_ratio(a: str, b: str) -> float:
    """Ratio after sorting each string's whitespace tokens lexicographically.

    Duplicate tokens are kept, so only token order is forgiven.
    """
    return ratio(" ".join(sorted(a.split())), " ".join(sorted(b.split())))


def token_set_ratio(a: str, b: str) -> float:
    """Ratio that forgives both token order and duplicate tokens.

    Builds three strings from the deduplicated token sets (the sorted
    intersection, and the intersection followed by each side's leftover
    tokens) and returns the best pairwise ratio among them.
    """
    tokens_a = set(a.split())
    tokens_b = set(b.split())
    inter = sorted(tokens_a & tokens_b)
    s0 = " ".join(inter)
    s1 = " ".join(inter + sorted(tokens_a - tokens_b))
    s2 = " ".join(inter + sorted(tokens_b - tokens_a))
    return max(ratio(s0, s1), ratio(s0, s2), ratio(s1, s2))


@dataclass(frozen=True)
class SimilaritySuite:
    """The four component similarities plus their arithmetic mean."""

    ratio: float
    partial_ratio: float
    token_sort_ratio: float
    token_set_ratio: float

    @property
    def aggregate(self) -> float:
        return (self.ratio + self.partial_ratio + self.token_sort_ratio + self.token_set_ratio) / 4.0

    @property
    def best_component(self) -> float:
        return max(self.ratio, self.partial_ratio, self.token_sort_ratio, self.token_set_ratio)


def similarity_suite(a: str, b: str, clean: bool = True) -> SimilaritySuite:
    """Compute all four similarities between two strings.

    By default both inputs are run through :func:`clean_cell` first so that
    case, accents, and punctuation differences do not count against the match.
    """
    if clean:
        a = clean_cell(a)
        b = clean_cell(b)
    return SimilaritySuite(
        ratio=ratio(a, b),
        partial_ratio=partial_ratio(a, b),
        token_sort_ratio=token_sort_ratio(a, b),
        token_set_ratio=token_set_ratio(a, b),
    )


def aggregate_similarity(a: str, b: str, clean: bool = True) -> float:
    """Mean of the four similarities; the score used for surface filtering."""
    return similarity_suite(a, b, clean=clean).aggregate


def best_component_similarity(a: str, b: str, clean: bool = True) -> float:
    """Maximum of the four similarities; the per-value score used in value matching."""
    return similarity_suite(a, b, clean=clean).best_component

"""Cell text cleaning and rule-based data-type parsing.

Cleaning turns arbitrary web-extracted cell text into lowercase ASCII words:
mojibake repair, HTML stripping, accent folding, punctuation removal. The
data-type parser then classifies a cleaned cell as textual or numerical with
a deterministic rule set (no external taggers). Both are total functions.
"""

from __future__ import annotations

import html
import re
import unicodedata
from enum import Enum
from typing import Callable


class CellType(Enum):
    TEXTUAL = "textual"
    NUMERICAL = "numerical"
    EMPTY = "empty"


# Characters whose UTF-8 byte sequences are commonly re-decoded as cp1252,
# producing sequences like "â€”" for an em dash. The table maps the garbled
# form back to the intended character; folding to ASCII happens later.
_MOJIBAKE_TARGETS = (
    "—–‘’“”…€™•"
    "œŒàáâãäåçè"
    "éêëìíîïñòó"
    "ôõöùúûüýÉÈ"
    "ÖÜ° "
)


def _build_mojibake_table() -> dict[str, str]:
    table = {}
    for ch in _MOJIBAKE_TARGETS:
        try:
            garbled = ch.encode("utf-8").decode("cp1252")
        except UnicodeDecodeError:
            continue
        table[garbled] = ch
    return table


_MOJIBAKE = _build_mojibake_table()
# Longest first so multi-char sequences are not clipped by their prefixes.
_MOJIBAKE_RE = re.compile(
    "|".join(re.escape(k) for k in sorted(_MOJIBAKE, key=len, reverse=True))
)

_TAG_RE = re.compile(r"<[^<>]*>")
_NON_ALNUM_RE = re.compile(r"[^A-Za-z0-9]+")


def clean_cell(raw: str) -> str:
    """Normalize a raw cell value to collapsed lowercase ASCII words.

    Steps, in order: mojibake repair, HTML tag then entity removal, accent
    folding (canonical decomposition, combining marks dropped), punctuation
    to spaces, whitespace collapse, lowercasing. Idempotent.
    """
    s = _MOJIBAKE_RE.sub(lambda m: _MOJIBAKE[m.group(0)], raw)
    s = _TAG_RE.sub(" ", s)
    s = html.unescape(s)
    s = unicodedata.normalize("NFD", s)
    s = "".join(ch for ch in s if not unicodedata.combining(ch))
    s = _NON_ALNUM_RE.sub(" ", s)
    return s.strip().lower()


def tokenize(text: str) -> list[str]:
    """Split text into the lowercase accent-folded alphanumeric tokens used by the label index."""
    s = unicodedata.normalize("NFD", text)
    s = "".join(ch for ch in s if not unicodedata.combining(ch))
    return _NON_ALNUM_RE.sub(" ", s).lower().split()


_MONTHS = frozenset(
    "january february march april may june july august september october november december "
    "jan feb mar apr jun jul aug sep sept oct nov dec".split()
)

_UNITS = frozenset(
    "km m cm mm mi ft yd in kg g mg t lb lbs oz ml l gal "
    "s sec secs ms min mins h hr hrs mph kmh kph "
    "percent pct usd eur gbp jpy chf dollar dollars euro euros pound pounds yen cents "
    "deg degrees c f k kw mw gw hp rpm px".split()
)

_DIGIT_GROUPS_RE = re.compile(r"\d+(?: \d+)*")
_ORDINAL_RE = re.compile(r"\d+(?:st|nd|rd|th)")
_DIGIT_TOKEN_RE = re.compile(r"\d+(?:st|nd|rd|th)?")


def _is_digit_groups(cell: str) -> bool:
    # Integers, split decimals ("3 14"), dates ("2005 05 22"), times, phone
    # groups; covers year literals as the single-group case.
    return _DIGIT_GROUPS_RE.fullmatch(cell) is not None


def _is_ordinal(cell: str) -> bool:
    return _ORDINAL_RE.fullmatch(cell) is not None


def _is_quantity(cell: str) -> bool:
    tokens = cell.split()
    if len(tokens) < 2 or tokens[-1] not in _UNITS:
        return False
    return _is_digit_groups(" ".join(tokens[:-1]))


def _is_clock_time(cell: str) -> bool:
    tokens = cell.split()
    if len(tokens) < 2 or tokens[-1] not in ("am", "pm"):
        return False
    return _is_digit_groups(" ".join(tokens[:-1]))


def _is_month_date(cell: str) -> bool:
    # "may 2005", "22 may 2005", "3rd may": every token is a digit group,
    # ordinal, or month name, with at least one month and one digit-bearing
    # token so a bare month name stays textual.
    tokens = cell.split()
    has_month = False
    has_digits = False
    for tok in tokens:
        if tok in _MONTHS:
            has_month = True
        elif _DIGIT_TOKEN_RE.fullmatch(tok):
            has_digits = True
        else:
            return False
    return has_month and has_digits


_NUMERIC_RULES: tuple[Callable[[str], bool], ...] = (
    _is_digit_groups,
    _is_ordinal,
    _is_quantity,
    _is_clock_time,
    _is_month_date,
)


def parse_cell_dtype(clean: str) -> CellType:
    """Classify a cleaned cell as empty, numerical, or textual.

    A cell is numerical only when the whole cell matches one of the
    numeric/temporal rules; any leftover alphabetic content makes it textual.
    """
    if not clean.strip():
        return CellType.EMPTY
    for rule in _NUMERIC_RULES:
        if rule(clean):
            return CellType.NUMERICAL
    return CellType.TEXTUAL


# Cell typers map a cleaned cell string to a CellType; parse_cell_dtype is the
# default, and table construction accepts any replacement with this signature.
CellTyper = Callable[[str], CellType]

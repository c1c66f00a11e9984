"""The four similarity measures against their brute-force definitions."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import (
    dp_levenshtein,
    oracle_aggregate,
    oracle_partial_ratio,
    oracle_ratio,
    oracle_token_set_ratio,
    oracle_token_sort_ratio,
)
from rowlink.similarity import (
    aggregate_similarity,
    best_component_similarity,
    levenshtein,
    partial_ratio,
    ratio,
    similarity_suite,
    token_set_ratio,
    token_sort_ratio,
)

words = st.text(alphabet="abc ", max_size=8)


class TestRatio:
    def test_identity(self):
        assert ratio("abc", "abc") == 1.0

    def test_kitten_sitting(self):
        assert dp_levenshtein("kitten", "sitting") == 3
        assert ratio("kitten", "sitting") == 1 - 3 / 7

    def test_full_deletion(self):
        assert ratio("", "abc") == 0.0

    def test_both_empty(self):
        assert ratio("", "") == 1.0


class TestPartialRatio:
    def test_containment(self):
        assert partial_ratio("island", "the island movie") == 1.0

    def test_window_enumeration(self):
        # best window is "aby": distance 1 of 3
        assert partial_ratio("abc", "xxabyy") == oracle_partial_ratio("abc", "xxabyy") == 1 - 1 / 3

    def test_single_char(self):
        assert partial_ratio("a", "a") == 1.0

    def test_empty_shorter(self):
        assert partial_ratio("", "abc") == 1.0


class TestTokenRatios:
    def test_token_sort_reorder(self):
        assert token_sort_ratio("michael bay", "bay michael") == 1.0

    def test_token_set_duplicates(self):
        assert token_set_ratio("a a b", "a b") == 1.0

    def test_token_set_three_way(self):
        expected = oracle_token_set_ratio("new york city", "york new")
        assert token_set_ratio("new york city", "york new") == expected == 1.0


class TestSuite:
    def test_equal_after_cleaning(self):
        suite = similarity_suite("the island", "The Island")
        assert suite.ratio == suite.partial_ratio == 1.0
        assert suite.token_sort_ratio == suite.token_set_ratio == 1.0
        assert suite.aggregate == 1.0

    def test_aggregate_is_mean(self):
        suite = similarity_suite("the insland", "The Island")
        expected = (
            suite.ratio + suite.partial_ratio + suite.token_sort_ratio + suite.token_set_ratio
        ) / 4.0
        assert suite.aggregate == expected

    def test_misspelled_pair_against_oracle(self):
        value = aggregate_similarity("the insland", "The Island")
        assert value == oracle_aggregate("the insland", "the island")
        assert value >= 0.8

    def test_best_component(self):
        assert best_component_similarity("bay michael", "Michael Bay") == 1.0
        assert aggregate_similarity("bay michael", "Michael Bay") < 0.8


@given(words, words)
def test_symmetry_and_bounds(a, b):
    for fn in (ratio, partial_ratio, token_sort_ratio, token_set_ratio):
        left, right = fn(a, b), fn(b, a)
        assert left == right
        assert 0.0 <= left <= 1.0


@given(words)
def test_identity_is_one(a):
    assert ratio(a, a) == 1.0
    assert partial_ratio(a, a) == 1.0
    assert token_sort_ratio(a, a) == 1.0
    assert token_set_ratio(a, a) == 1.0


def test_levenshtein_matches_dp_oracle_exhaustively_short():
    # all pairs up to length 3 over a 3-letter alphabet
    alphabet = "abc"
    strings = [""]
    frontier = [""]
    for _ in range(3):
        frontier = [s + c for s in frontier for c in alphabet]
        strings.extend(frontier)
    for a in strings:
        for b in strings:
            assert levenshtein(a, b) == dp_levenshtein(a, b)


def test_all_measures_match_oracles_random_sample():
    rng = random.Random(20240817)
    alphabet = "abc "
    for _ in range(3000):
        a = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
        b = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
        assert ratio(a, b) == oracle_ratio(a, b)
        assert partial_ratio(a, b) == oracle_partial_ratio(a, b)
        assert token_sort_ratio(a, b) == oracle_token_sort_ratio(a, b)
        assert token_set_ratio(a, b) == oracle_token_set_ratio(a, b)

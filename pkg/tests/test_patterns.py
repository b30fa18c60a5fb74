"""Pattern math tests.

Counts and the default dictionary are cross-checked against the
permutation-filter oracle in tests/oracles.py; the 1624 figure for fourgrams
is the published count for 3x3 grids with the skip-over rule.
"""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import reference_distance, reference_enumerate, reference_pattern_valid
from twodfa.patterns import (
    all_pairwise_distances,
    enumerate_patterns,
    is_valid_pattern,
    pattern_digits,
    pattern_from_digits,
    segments,
    select_distant_patterns,
    similarity_distance,
    slip_variants,
)

DEFAULT_DICTIONARY = [
    (1, 2, 3, 4), (1, 2, 4, 3), (1, 2, 5, 3), (1, 2, 6, 3), (1, 2, 7, 4),
    (1, 2, 9, 4), (1, 4, 2, 3), (1, 4, 3, 2), (1, 4, 5, 2), (1, 4, 7, 2),
]

valid_patterns = st.sampled_from(enumerate_patterns(4))


class TestValidity:
    def test_adjacent_moves(self):
        assert is_valid_pattern([1, 2, 3, 4])

    def test_skip_over_unvisited_dot(self):
        assert not is_valid_pattern([1, 3, 2, 4])

    def test_skip_over_visited_dot_and_knight_move(self):
        assert is_valid_pattern([1, 5, 9, 2])

    def test_duplicates_rejected(self):
        assert not is_valid_pattern([1, 2, 1, 4])

    def test_length_bounds(self):
        assert not is_valid_pattern([1])
        assert is_valid_pattern([1, 2])
        assert is_valid_pattern(list(range(1, 10)))

    def test_out_of_range_dot(self):
        assert not is_valid_pattern([0, 1])
        assert not is_valid_pattern([1, 10])

    @given(st.lists(st.integers(min_value=1, max_value=9), min_size=2, max_size=9))
    def test_agrees_with_oracle(self, dots):
        assert is_valid_pattern(dots) == reference_pattern_valid(dots)


class TestEnumeration:
    def test_fourgram_count(self):
        assert len(enumerate_patterns(4)) == 1624

    def test_pair_count(self):
        # 72 ordered pairs minus the 16 blocked skips (8 triples x 2 directions)
        assert len(enumerate_patterns(2)) == 56

    def test_fourgrams_starting_at_upper_left(self):
        starting = [p for p in enumerate_patterns(4) if p[0] == 1]
        assert len(starting) == 154  # golden value, frozen from the oracle

    @pytest.mark.parametrize("length", [2, 3, 4])
    def test_matches_oracle_exactly(self, length):
        assert enumerate_patterns(length) == reference_enumerate(length)

    def test_all_valid_no_duplicates(self):
        pats = enumerate_patterns(4)
        assert len(set(pats)) == len(pats)
        assert all(is_valid_pattern(p) for p in pats)

    def test_lexicographic_order(self):
        pats = enumerate_patterns(4)
        assert pats == sorted(pats)

    def test_length_out_of_range(self):
        with pytest.raises(ValueError):
            enumerate_patterns(1)
        with pytest.raises(ValueError):
            enumerate_patterns(10)


class TestSimilarityDistance:
    def test_identity(self):
        assert similarity_distance((1, 2, 3, 4), (1, 2, 3, 4)) == 0

    def test_single_wrong_final_stroke(self):
        # the five-dot example: one wrong connecting line
        assert similarity_distance((1, 2, 3, 6, 5), (1, 2, 3, 6, 8)) == 1

    def test_fourgram_single_replacement(self):
        assert similarity_distance((1, 2, 3, 4), (1, 2, 3, 6)) == 1

    def test_length_difference_costs_insertions(self):
        assert similarity_distance((1, 2, 3), (1, 2, 3, 4)) == 1
        assert similarity_distance((1, 2), (1, 2, 3, 4)) == 2

    @settings(max_examples=300)
    @given(valid_patterns, valid_patterns)
    def test_matches_oracle(self, a, b):
        assert similarity_distance(a, b) == reference_distance(a, b)

    @settings(max_examples=300)
    @given(valid_patterns, valid_patterns)
    def test_symmetric_and_zero_iff_equal(self, a, b):
        d = similarity_distance(a, b)
        assert d == similarity_distance(b, a)
        assert (d == 0) == (a == b)

    @settings(max_examples=300)
    @given(valid_patterns, valid_patterns, valid_patterns)
    def test_triangle_inequality(self, a, b, c):
        assert similarity_distance(a, c) <= similarity_distance(a, b) + similarity_distance(b, c)


class TestDictionarySelection:
    def test_default_build_is_reproducible(self):
        assert select_distant_patterns(4, 1, 2, 10) == DEFAULT_DICTIONARY
        assert select_distant_patterns(4, 1, 2, 10) == DEFAULT_DICTIONARY

    def test_pairwise_distance_at_least_two(self):
        dists = all_pairwise_distances(select_distant_patterns(4, 1, 2, 10))
        assert min(dists) >= 2

    def test_all_start_at_upper_left(self):
        assert all(p[0] == 1 for p in select_distant_patterns(4, 1, 2, 10))

    def test_min_distance_one_admits_prefix_of_enumeration(self):
        first = [p for p in enumerate_patterns(4) if p[0] == 1][:10]
        assert select_distant_patterns(4, 1, 1, 10) == first

    def test_exhaustion_returns_greedy_maximal_set(self):
        full = select_distant_patterns(4, 1, 2, 10**9)
        assert len(full) == 31  # golden value, frozen from an exhaustion run
        assert min(all_pairwise_distances(full)) >= 2

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            select_distant_patterns(min_distance=0)
        with pytest.raises(ValueError):
            select_distant_patterns(max_size=0)
        with pytest.raises(ValueError):
            select_distant_patterns(start_dot=0)


class TestSlipVariants:
    def test_never_contains_the_pattern_itself(self):
        assert (1, 2, 3, 6) not in slip_variants((1, 2, 3, 6))

    def test_every_variant_at_distance_one(self):
        for p in select_distant_patterns(4, 1, 2, 10):
            for q in slip_variants(p):
                assert reference_distance(p, q) == 1
                assert len(q) == len(p)

    def test_complete_against_oracle(self):
        rng = random.Random(3)
        pool = enumerate_patterns(4)
        for p in rng.sample(pool, 25):
            expected = sorted(q for q in pool if q != p and reference_distance(p, q) == 1)
            assert sorted(slip_variants(p)) == expected

    def test_dictionary_single_slip_closure(self):
        entries = set(select_distant_patterns(4, 1, 2, 10))
        for p in entries:
            assert not (set(slip_variants(p)) & (entries - {p}))

    def test_invalid_pattern_rejected(self):
        with pytest.raises(ValueError):
            slip_variants((1, 3))  # skips over unvisited 2


class TestDigitsForm:
    def test_round_trip(self):
        assert pattern_from_digits(pattern_digits((1, 2, 3, 6))) == (1, 2, 3, 6)

    def test_invalid_digits(self):
        with pytest.raises(ValueError):
            pattern_from_digits("1324")
        with pytest.raises(ValueError):
            pattern_from_digits("10")
        with pytest.raises(ValueError):
            pattern_from_digits("")

    def test_segments(self):
        assert segments((1, 2, 3, 6)) == ((1, 2), (2, 3), (3, 6))

"""
Unit tests for the vectorised exhaustive search.
"""
import math

import numpy as np
import pytest
import sys
from pathlib import Path

# Add project root to path
sys.path.append(str(Path(__file__).parent.parent.parent))

from permpoly import field_core as fc
from permpoly.search import (
    candidate_codes,
    count_permutation_functions,
    image_sizes,
    injective_rows,
    search,
    search_space_size,
    sort_key,
)


@pytest.fixture
def f7():
    return fc.make_field(7)


def quartic_domains(q):
    """Normalised quartics: x^4 + a2 x^2 + a1 x."""
    every = list(range(q))
    return [[0], every, every, [0], [1]]


class TestHelpers:
    """Test the small building blocks."""

    def test_injective_rows_bitmask(self):
        values = np.array([[0, 1, 2], [0, 0, 1], [2, 1, 0]])
        assert injective_rows(values, 3).tolist() == [True, False, True]

    def test_injective_rows_sorted_path(self):
        """Orders above 62 fall back to sorting."""
        perm = np.random.default_rng(0).permutation(100)
        repeated = perm.copy()
        repeated[5] = repeated[6]
        assert injective_rows(np.stack([perm, repeated]), 100).tolist() == [True, False]

    def test_space_size(self):
        assert search_space_size([[0], [0, 1, 2], [1, 2]]) == 6
        assert search_space_size([[0], []]) == 0

    def test_sort_key(self):
        codes = [(0, 0, 1), (0, 1), (0, 2, 1), (0, 1, 2)]
        assert sorted(codes, key=sort_key) == [(0, 1), (0, 0, 1), (0, 2, 1), (0, 1, 2)]

    def test_candidate_codes(self):
        assert candidate_codes([[0], [0, 1, 2], [1]], 2) == (0, 2, 1)
        assert candidate_codes([[0, 1], [0, 5]], 1) == (1,)


class TestSearch:
    """Test search results and statistics."""

    def test_normalised_quartics_over_f7(self, f7):
        found, stats = search(f7, quartic_domains(7), jobs=1)
        assert found == [(0, 3, 0, 0, 1), (0, 4, 0, 0, 1)]
        assert stats["search_space"] == 49
        assert stats["filtered"] == 0

    def test_cubics_over_f5(self):
        f5 = fc.make_field(5)
        every = list(range(5))
        found, _ = search(f5, [[0], every, [0], [1]], jobs=1)
        assert found == [(0, 0, 0, 1)]

    def test_small_blocks_give_same_result(self, f7):
        """Many tiny chunks merge back into the same sorted list."""
        baseline, _ = search(f7, quartic_domains(7), jobs=1)
        chunked, _ = search(f7, quartic_domains(7), jobs=1, block_rows=5, chunk_target=5)
        assert chunked == baseline

    def test_parallel_matches_serial(self, f7):
        serial, _ = search(f7, quartic_domains(7), jobs=1, block_rows=5, chunk_target=5)
        parallel, _ = search(f7, quartic_domains(7), jobs=2, block_rows=5, chunk_target=5)
        assert parallel == serial

    def test_power_filter_keeps_result(self, f7):
        """t = 2 is the first Hermite exponent for quartics over F_7."""
        baseline, _ = search(f7, quartic_domains(7), jobs=1)
        filtered, stats = search(f7, quartic_domains(7), jobs=1, power_filter=2)
        assert filtered == baseline
        assert stats["filtered"] > 0

    def test_orthomorphism_filter(self, f7):
        """a x + b is an orthomorphism iff a is neither 0 nor 1."""
        found, _ = search(f7, [list(range(7)), list(range(1, 7))], jobs=1, ortho=True)
        assert len(found) == 35
        assert all(c[1] != 1 for c in found)

    def test_empty_domain(self, f7):
        found, stats = search(f7, [[0], []], jobs=1)
        assert found == []
        assert stats["search_space"] == 0

    def test_extension_field(self):
        """x^3 + a x over F_9 permutes iff -a is not a nonzero square."""
        f9 = fc.make_field(3, 2)
        found, _ = search(f9, [[0], list(range(9)), [0], [1]], jobs=1)
        expected = [a for a in range(9) if a == 0 or not fc.is_square(f9, fc.neg(f9, a))]
        assert [c[1] if len(c) > 1 else 0 for c in found] == sorted(expected)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_permutation_function_count(q):
    """Every permutation of F_q is a reduced polynomial: q! of them."""
    assert count_permutation_functions(fc.field_from_order(q)) == math.factorial(q)


def test_image_sizes(f7):
    """x^2 + a x takes (q+1)/2 values over F_7 for every a."""
    sizes = image_sizes(f7, [[0], list(range(7)), [1]])
    assert sizes.tolist() == [4] * 7


def test_image_sizes_index_order(f7):
    """Entry i belongs to candidate_codes(domains, i)."""
    domains = [list(range(7)), [0], [0, 1]]
    sizes = image_sizes(f7, domains)
    for i, size in enumerate(sizes):
        codes = candidate_codes(domains, i)
        values = {sum(c * pow(x, k, 7) for k, c in enumerate(codes)) % 7 for x in range(7)}
        assert size == len(values)

"""Character-sum counting against partitions, hook lengths, and the
independent convolution count."""

import pytest

from hurwitz.frobenius import (MAX_COUNT_DEGREE, conjugate_partition,
                               frobenius_count, hook_dimension, partitions,
                               transposition_character)
from hurwitz.systems import count_systems, enumerate_systems

# values computed two independent ways before freezing: transfer-matrix
# convolution over S_d and, where small enough, direct enumeration
KNOWN = {
    (2, 0, 4): 1,
    (3, 0, 4): 27,
    (2, 1, 4): 4,
    (3, 1, 0): 18,
    (3, 2, 6): 314928,
    (4, 0, 8): 140160,
}


class TestPartitions:
    def test_counts(self):
        for n, p in ((1, 1), (2, 2), (3, 3), (4, 5), (5, 7), (6, 11), (8, 22)):
            assert len(list(partitions(n))) == p

    def test_lex_descending(self):
        parts = list(partitions(5))
        assert parts[0] == (5,)
        assert parts[-1] == (1, 1, 1, 1, 1)
        assert parts == sorted(parts, reverse=True)
        assert all(sum(lam) == 5 for lam in parts)

    def test_conjugate(self):
        assert conjugate_partition((3, 1)) == (2, 1, 1)
        assert conjugate_partition((2, 2)) == (2, 2)
        for lam in partitions(6):
            assert conjugate_partition(conjugate_partition(lam)) == lam


class TestCharacters:
    def test_hook_dimensions_s4(self):
        dims = {lam: hook_dimension(lam) for lam in partitions(4)}
        assert dims == {(4,): 1, (3, 1): 3, (2, 2): 2, (2, 1, 1): 3,
                        (1, 1, 1, 1): 1}
        assert sum(v * v for v in dims.values()) == 24

    def test_dimension_sum_of_squares(self):
        import math
        for d in range(2, 8):
            assert sum(hook_dimension(lam) ** 2 for lam in partitions(d)) == math.factorial(d)

    def test_transposition_characters_s3(self):
        assert transposition_character((3,)) == 1
        assert transposition_character((1, 1, 1)) == -1
        assert transposition_character((2, 1)) == 0

    def test_transposition_characters_s4(self):
        want = {(4,): 1, (3, 1): 1, (2, 2): 0, (2, 1, 1): -1, (1, 1, 1, 1): -1}
        got = {lam: transposition_character(lam) for lam in partitions(4)}
        assert got == want


class TestCounts:
    def test_known_values(self):
        for (d, h, w), n in KNOWN.items():
            assert frobenius_count(d, h, w) == n

    def test_agrees_with_convolution(self):
        for d in (2, 3, 4):
            for h in (0, 1, 2):
                for w in (0, 2, 4, 6):
                    assert frobenius_count(d, h, w) == count_systems(d, h, w)

    def test_agrees_with_enumeration(self):
        for d, h, w in ((2, 1, 4), (3, 0, 4), (3, 1, 2), (4, 0, 4)):
            assert frobenius_count(d, h, w) == sum(
                1 for _ in enumerate_systems(d, h, w))

    def test_odd_w_is_zero(self):
        assert frobenius_count(3, 1, 5) == 0
        assert frobenius_count(4, 0, 1) == 0

    def test_trivial_degree(self):
        assert frobenius_count(1, 3, 0) == 1
        assert frobenius_count(1, 0, 2) == 0

    def test_degree_cap(self):
        frobenius_count(MAX_COUNT_DEGREE, 1, 2)
        with pytest.raises(ValueError):
            frobenius_count(MAX_COUNT_DEGREE + 1, 1, 2)
        with pytest.raises(ValueError):
            frobenius_count(0, 0, 0)

    def test_large_values_exact(self):
        # spot values big enough to catch float contamination
        assert frobenius_count(5, 1, 10) == 2402343995760
        assert frobenius_count(8, 2, 4) == 81030686269500656640

"""Exact system counts by the Frobenius character sum.

The number of solutions of t_1 ... t_w [a_1,b_1] ... [a_h,b_h] = 1
with the t_j in the transposition class C of S_d is

    N = |C|^w |S_d|^(2h-1) * sum over irreducible characters chi of
        chi(tau)^w / chi(1)^(w + 2h - 2)

an integer, computed here in exact rational arithmetic.  Characters
of S_d are indexed by partitions; the dimension comes from the hook
length formula and the transposition value from the content sum

    chi(tau) / chi(1) = (sum_j C(lam_j, 2) - sum_j C(lam'_j, 2)) / C(d, 2).

This count is the independent oracle for the exhaustive enumerator:
the two must agree exactly wherever both are feasible.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterator

MAX_COUNT_DEGREE = 8


def partitions(n: int) -> Iterator[tuple[int, ...]]:
    """All partitions of n, parts descending, in lex-descending order."""
    def rec(remaining: int, cap: int, prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield prefix
            return
        for part in range(min(cap, remaining), 0, -1):
            yield from rec(remaining - part, part, prefix + (part,))
    yield from rec(n, n, ())


def conjugate_partition(lam: tuple[int, ...]) -> tuple[int, ...]:
    if not lam:
        return ()
    return tuple(sum(1 for part in lam if part > k) for k in range(lam[0]))


def hook_dimension(lam: tuple[int, ...]) -> int:
    """Dimension of the S_n irreducible labeled by lam."""
    n = sum(lam)
    conj = conjugate_partition(lam)
    hooks = 1
    for r, row in enumerate(lam):
        for c in range(row):
            hooks *= (row - c) + (conj[c] - r) - 1
    dim, rem = divmod(factorial(n), hooks)
    assert rem == 0
    return dim


def transposition_character(lam: tuple[int, ...]) -> int:
    """chi_lam evaluated on a transposition; an integer for every lam."""
    n = sum(lam)
    if n < 2:
        raise ValueError("transpositions need degree at least 2")
    contents = sum(comb(part, 2) for part in lam) - sum(comb(part, 2) for part in conjugate_partition(lam))
    value = Fraction(hook_dimension(lam) * contents, comb(n, 2))
    assert value.denominator == 1
    return int(value)


@lru_cache(maxsize=None)
def _character_table_on_transpositions(d: int) -> tuple[tuple[int, int], ...]:
    return tuple((hook_dimension(lam), transposition_character(lam))
                 for lam in partitions(d))


def frobenius_count(d: int, h: int, w: int) -> int:
    """Number of valid systems with these parameters, exactly."""
    if d < 1 or h < 0 or w < 0:
        raise ValueError("bad parameters d=%d h=%d w=%d" % (d, h, w))
    if d > MAX_COUNT_DEGREE:
        raise ValueError("character-sum count is limited to d <= %d" % MAX_COUNT_DEGREE)
    if d == 1:
        return 1 if w == 0 else 0
    if w % 2 != 0:
        return 0
    class_size = comb(d, 2)
    order = factorial(d)
    total = Fraction(0)
    for dim, chi_tau in _character_table_on_transpositions(d):
        total += Fraction(chi_tau) ** w / Fraction(dim) ** (w + 2 * h - 2)
    # |G|^(2h-1) is 1/|G| at h = 0; the full product is an integer regardless
    result = Fraction(order) ** (2 * h - 1) * class_size**w * total
    assert result.denominator == 1 and result >= 0
    return int(result)

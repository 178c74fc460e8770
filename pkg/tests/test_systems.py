"""Data model tests: validation, counts against independent formulas,
serialization round trips, enumeration exactness."""

import random

import pytest

from hurwitz import systems as S
from hurwitz.perms import identity, transposition


def make(d, handles, ts):
    return S.HurwitzSystem(d, tuple(handles), tuple(ts))


class TestValidate:
    def test_trivial_degree_one(self):
        sys = make(1, [], [])
        assert S.validate(sys).ok
        assert S.genus(sys) == 0

    def test_good_sphere_system(self):
        t = transposition(2, 1, 2)
        sys = make(2, [], [t, t, t, t])
        assert S.validate(sys).ok
        assert S.genus(sys) == 1

    def test_relator_violation(self):
        t12 = transposition(3, 1, 2)
        t23 = transposition(3, 2, 3)
        sys = make(3, [], [t12, t12, t12, t23])
        rep = S.validate(sys)
        assert not rep.ok
        assert "relator" in rep.messages[0]

    def test_odd_w_rejected(self):
        # an odd number of transpositions can never multiply to an even
        # permutation, but the parity check should fire regardless
        t = transposition(2, 1, 2)
        sys = make(2, [], [t, t, t])
        rep = S.validate(sys)
        assert not rep.ok

    def test_non_transposition_entry(self):
        sys = make(3, [], [(2, 3, 1), (3, 1, 2)])
        rep = S.validate(sys)
        assert not rep.ok
        assert "transposition" in rep.messages[0]

    def test_degree_mismatch(self):
        sys = make(3, [], [transposition(2, 1, 2)] * 2)
        assert not S.validate(sys).ok


class TestGenus:
    def test_formula(self):
        # d (h - 1) + w/2 + 1 on a few hand-checked cases
        assert S.genus(make(2, [], [transposition(2, 1, 2)] * 2)) == 0
        i2 = identity(2)
        assert S.genus(make(2, [i2, i2], [])) == 1
        sys = make(2, [i2, i2], [transposition(2, 1, 2)] * 4)
        assert S.genus(sys) == 3


class TestMonodromy:
    def test_full_vs_not(self):
        t12 = transposition(3, 1, 2)
        t13 = transposition(3, 1, 3)
        assert S.is_full_monodromy(make(3, [], [t12, t13, t13, t12]))
        assert not S.is_full_monodromy(make(3, [], [t12, t12, t12, t12]))

    def test_handles_can_complete_monodromy(self):
        # transpositions alone span only {1,2}, the handle supplies the
        # 3-cycle, so the fast single-block path cannot answer this one
        t12 = transposition(3, 1, 2)
        c3 = (2, 3, 1)
        sys = make(3, [c3, c3], [t12, t12])
        assert S.validate(sys).ok
        assert S.connected_cover(sys)
        assert S.is_full_monodromy(sys)

    def test_connected_but_not_full(self):
        c3 = (2, 3, 1)
        sys = make(3, [c3, identity(3)], [])
        assert S.validate(sys).ok
        assert S.connected_cover(sys)
        assert not S.is_full_monodromy(sys)

    def test_branching_blocks_window(self):
        t12 = transposition(4, 1, 2)
        t34 = transposition(4, 3, 4)
        sys = make(4, [], [t12, t12, t34, t34])
        assert S.branching_blocks(sys) == [(1, 2), (3, 4)]
        assert S.branching_blocks(sys, 1, 2) == [(1, 2), (3,), (4,)]
        assert S.branching_blocks(sys, 3, 4) == [(1,), (2,), (3, 4)]
        with pytest.raises(ValueError):
            S.branching_blocks(sys, 0, 2)


class TestSerialization:
    def test_exact_line(self):
        sys = make(3, [(2, 3, 1), (2, 1, 3)],
                   [(2, 1, 3), (1, 3, 2), (1, 3, 2), (2, 1, 3)])
        line = S.serialize(sys)
        assert line == "d=3 h=1 w=4 | t: 2,1,3 ; 1,3,2 ; 1,3,2 ; 2,1,3 | ab: 2,3,1 , 2,1,3"
        assert S.deserialize(line) == sys
        # deserialize checks structure only; this line fails validate
        assert not S.validate(sys).ok

    def test_empty_sections(self):
        sys = make(1, [], [])
        line = S.serialize(sys)
        assert S.deserialize(line) == sys

    def test_round_trip_random(self):
        rng = random.Random(11)
        for _ in range(100):
            sys = S.random_system(4, 1, 6, rng)
            assert S.deserialize(S.serialize(sys)) == sys

    def test_parse_error_offsets(self):
        with pytest.raises(S.KeyParseError) as ei:
            S.deserialize("q=3 h=0 w=0 | t: - | ab: -")
        assert ei.value.offset == 0
        line = "d=3 h=0 w=2 | t: 2,1,3 ; 9,1,3 | ab: -"
        with pytest.raises(S.KeyParseError) as ei:
            S.deserialize(line)
        assert line[ei.value.offset:].startswith("9,1,3")

    def test_semantic_problems_left_to_validate(self):
        sys = S.deserialize("d=3 h=0 w=2 | t: 2,1,3 ; 1,3,2 | ab: -")
        assert not S.validate(sys).ok

    def test_trailing_garbage(self):
        good = S.serialize(make(2, [], [transposition(2, 1, 2)] * 2))
        with pytest.raises(S.KeyParseError):
            S.deserialize(good + " ")


class TestCounts:
    # frozen oracle values; the character-sum module cross-checks these
    CASES = {
        (2, 0, 4): 1,
        (3, 0, 4): 27,
        (2, 1, 4): 4,
        (4, 0, 8): 140160,
        (3, 2, 6): 314928,
    }

    def test_count_systems_oracles(self):
        for (d, h, w), n in self.CASES.items():
            assert S.count_systems(d, h, w) == n, (d, h, w)

    def test_enumeration_matches_counts(self):
        for (d, h, w), n in self.CASES.items():
            if n > 10000:
                continue
            lst = list(S.enumerate_systems(d, h, w))
            assert len(lst) == n
            keys = [S.serialize(x) for x in lst]
            assert len(set(keys)) == n  # no duplicates
            for x in lst[:50]:
                assert S.validate(x).ok

    def test_sphere_cubic_census_detail(self):
        lst = list(S.enumerate_systems(3, 0, 4))
        full = [x for x in lst if S.is_full_monodromy(x)]
        disconn = [x for x in lst if not S.connected_cover(x)]
        assert len(lst) == 27
        assert len(full) == 24
        assert len(disconn) == 3

    def test_odd_w_enumerates_empty(self):
        assert list(S.enumerate_systems(3, 0, 3)) == []

    def test_guard_refuses_huge(self):
        with pytest.raises(ValueError, match="guard"):
            next(iter(S.enumerate_systems(8, 2, 20)))


class TestRandom:
    def test_valid_and_seed_stable(self):
        a = S.random_system(4, 1, 8, random.Random(3))
        b = S.random_system(4, 1, 8, random.Random(3))
        assert a == b
        assert S.validate(a).ok

    def test_filter_condition(self):
        rng = random.Random(5)
        for _ in range(20):
            sys = S.random_system(3, 0, 6, rng, filter=S.is_full_monodromy)
            assert S.is_full_monodromy(sys)

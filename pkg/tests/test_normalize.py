"""Constructive normalization: split normal form, braid realization of
window rewrites, monodromy repair, handle trivialization, and the
canonical form."""

import random

import pytest

from hurwitz.moves import apply_word
from hurwitz.normalize import (BudgetExceededError, NormalizeError,
                               OrbitMismatchError, canonical_star,
                               canonicalize, prop_split_normal_form,
                               realize_block_rewrite,
                               repair_branching_monodromy,
                               sort_standard_position, trivialize_handle)
from hurwitz.perms import (all_transpositions, cycles, from_cycles, identity,
                           compose, inverse, is_symmetric, product, support,
                           transposition)
from hurwitz.systems import (HurwitzSystem, branching_blocks,
                             is_full_monodromy, random_system, serialize,
                             validate)


def partitions_of(n):
    def rec(rest, cap):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail
    return rec(n, n)


def perm_of_type(n, lam):
    """One permutation of {1..n} per cycle type."""
    cycs, next_pt = [], 1
    for part in lam:
        cycs.append(tuple(range(next_pt, next_pt + part)))
        next_pt += part
    return from_cycles(n, cycs)


def sample_window(rng, n, w_m, g):
    """Random transposition window on {1..n} with product g and full
    generated group, by rejection."""
    ts_all = all_transpositions(n)
    while True:
        window = [ts_all[rng.randrange(len(ts_all))] for _ in range(w_m - 1)]
        last = compose(inverse(product(window, n)), g)
        pts = [p for p in range(1, n + 1) if last[p - 1] != p]
        if len(pts) != 2:
            continue
        window.append(last)
        if is_symmetric(window, n):
            return tuple(window)


class TestSplitNormalForm:
    def test_full_grid(self):
        # every block size to 5, every cycle type, every admissible
        # length up to 2#A + 4
        for n in range(2, 6):
            pts = tuple(range(1, n + 1))
            tau = transposition(n, 1, 2)
            for lam in partitions_of(n):
                g = perm_of_type(n, lam)
                s = len(cycles(g))
                body = n + s - 2
                for w_m in range(2 * n, 2 * n + 5):
                    if (w_m - body) % 2 != 0:
                        with pytest.raises(NormalizeError):
                            prop_split_normal_form(pts, g, w_m, tau)
                        continue
                    out = prop_split_normal_form(pts, g, w_m, tau)
                    assert len(out) == w_m
                    assert product(out, n) == g
                    assert is_symmetric(out, n)
                    assert out[-1] == out[-2] == tau
                    assert all(set(support(t)) <= set(pts) for t in out)

    def test_subblock_of_larger_degree(self):
        # points may sit inside a larger ambient degree
        g = from_cycles(6, [(4, 5, 6)])
        out = prop_split_normal_form((4, 5, 6), g, 8, transposition(6, 4, 5))
        assert product(out, 6) == g
        assert all(set(support(t)) <= {4, 5, 6} for t in out)

    def test_rejections(self):
        tau = transposition(3, 1, 2)
        with pytest.raises(NormalizeError, match="below 2#points"):
            prop_split_normal_form((1, 2, 3), identity(3), 4, tau)
        with pytest.raises(NormalizeError, match="parity"):
            prop_split_normal_form((1, 2, 3), transposition(3, 1, 2), 6, tau)
        with pytest.raises(NormalizeError, match="outside the block"):
            prop_split_normal_form((1, 2), transposition(3, 1, 3), 4,
                                   transposition(3, 1, 2))
        with pytest.raises(NormalizeError, match="inside the block"):
            prop_split_normal_form((1, 2, 3), identity(4), 6, transposition(4, 1, 4))
        with pytest.raises(NormalizeError, match="two points"):
            prop_split_normal_form((1,), identity(1), 2, identity(1))


class TestRealizeRewrite:
    def test_known_rewrite(self):
        t12, t23 = transposition(3, 1, 2), transposition(3, 2, 3)
        host = HurwitzSystem(3, (), (t12, t23, t23, t12))
        target = (t12, t12, t23, t23)
        tokens = realize_block_rewrite(host, 1, 4, target)
        assert tokens
        out = apply_word(host, " ".join(tokens))
        assert out.transpositions == target

    def test_window_offset(self):
        # rewriting an interior window leaves the rest alone
        t12, t23 = transposition(3, 1, 2), transposition(3, 2, 3)
        host = HurwitzSystem(3, (), (t12, t12, t23, t23, t12, t12))
        target = (t23, t23)
        tokens = realize_block_rewrite(host, 3, 4, target)
        out = apply_word(host, " ".join(tokens)) if tokens else host
        assert out.transpositions == (t12, t12, t23, t23, t12, t12)
        assert all(t.startswith("B3") or not t for t in tokens)

    def test_kluitmann_transitivity(self):
        # any two generating windows with one product are braid-connected
        rng = random.Random(20)
        for n in (2, 3, 4):
            for w_m in (4, 6, 8):
                if w_m > 8 or (n == 4 and w_m == 4):
                    continue
                for _ in range(2):
                    g = product([all_transpositions(n)[rng.randrange(
                        len(all_transpositions(n)))] for _ in range(w_m)], n)
                    src = sample_window(rng, n, w_m, g)
                    dst = sample_window(rng, n, w_m, g)
                    host = HurwitzSystem(n, (), src + tuple(reversed(src)))
                    tokens = realize_block_rewrite(host, 1, w_m, dst)
                    out = apply_word(host, " ".join(tokens)) if tokens else host
                    assert out.transpositions[:w_m] == dst
                    assert out.transpositions[w_m:] == tuple(reversed(src))

    def test_mismatched_products_hard_error(self):
        t12, t13 = transposition(3, 1, 2), transposition(3, 1, 3)
        host = HurwitzSystem(3, (), (t12, t12))
        with pytest.raises(OrbitMismatchError):
            realize_block_rewrite(host, 1, 2, (t12, t13))

    def test_disconnected_windows_hard_error(self):
        # equal products, different blocks: the search must exhaust and
        # report a mismatch rather than loop
        t12, t13 = transposition(3, 1, 2), transposition(3, 1, 3)
        host = HurwitzSystem(3, (), (t12, t12))
        with pytest.raises(OrbitMismatchError):
            realize_block_rewrite(host, 1, 2, (t13, t13))

    def test_budget(self):
        rng = random.Random(21)
        g = identity(4)
        src = sample_window(rng, 4, 8, g)
        dst = sample_window(rng, 4, 8, g)
        host = HurwitzSystem(4, (), src + tuple(reversed(src)))
        if src != dst:
            with pytest.raises(BudgetExceededError):
                realize_block_rewrite(host, 1, 8, dst, budget=3)


class TestStandardPosition:
    def test_sorts_blocks_contiguously(self):
        rng = random.Random(22)
        ts_pool = [transposition(6, 1, 2), transposition(6, 3, 4),
                   transposition(6, 5, 6)]
        for _ in range(40):
            while True:
                ts = [ts_pool[rng.randrange(3)] for _ in range(6)]
                if all(ts.count(t) % 2 == 0 for t in ts_pool):
                    break
            host = HurwitzSystem(6, (), tuple(ts))
            sorted_sys, tokens = sort_standard_position(host)
            replay = apply_word(host, " ".join(tokens)) if tokens else host
            assert replay == sorted_sys
            firsts = [support(t)[0] for t in sorted_sys.transpositions]
            assert firsts == sorted(firsts)

    def test_stable_within_block(self):
        t12 = transposition(4, 1, 2)
        t34 = transposition(4, 3, 4)
        host = HurwitzSystem(4, (), (t34, t12, t34, t12))
        sorted_sys, _ = sort_standard_position(host)
        assert sorted_sys.transpositions == (t12, t12, t34, t34)


class TestRepair:
    def test_merges_to_one_block(self):
        rng = random.Random(23)
        done = 0
        while done < 25:
            hs = random_system(3, 1, 6, rng)
            if len(branching_blocks(hs)) == 1:
                continue
            if not is_full_monodromy(hs):
                continue
            out, tokens = repair_branching_monodromy(hs, "fast")
            assert len(branching_blocks(out)) == 1
            replay = apply_word(hs, " ".join(tokens)) if tokens else hs
            assert replay == out
            assert validate(out).ok
            done += 1

    def test_single_block_is_untouched(self):
        t12, t13 = transposition(3, 1, 2), transposition(3, 1, 3)
        hs = HurwitzSystem(3, (), (t12, t12, t13, t13, t12, t12))
        out, tokens = repair_branching_monodromy(hs, "fast")
        assert out == hs and tokens == []


class TestTrivializeHandle:
    def test_handles_become_identity(self):
        rng = random.Random(24)
        for _ in range(25):
            hs = random_system(3, 1, 6, rng)
            if not is_full_monodromy(hs):
                continue
            out, tokens = trivialize_handle(hs, 1, "fast")
            a1, b1 = out.handle_pair(1)
            assert a1 == identity(3) and b1 == identity(3)
            replay = apply_word(hs, " ".join(tokens)) if tokens else hs
            assert replay == out
            assert validate(out).ok


class TestCanonical:
    def test_star_shape(self):
        star = canonical_star(3, 2, 8)
        assert star.handles == (identity(3),) * 4
        t12, t13 = transposition(3, 1, 2), transposition(3, 1, 3)
        assert star.transpositions == (t12,) * 6 + (t13, t13)
        assert validate(star).ok and is_full_monodromy(star)
        with pytest.raises(NormalizeError):
            canonical_star(3, 1, 4)
        with pytest.raises(NormalizeError):
            canonical_star(3, 1, 7)

    def test_canonicalize_random(self):
        rng = random.Random(25)
        for d, h, w in ((2, 1, 4), (2, 2, 4), (3, 1, 6)):
            star = canonical_star(d, h, w)
            done = 0
            while done < 10:
                hs = random_system(d, h, w, rng)
                if not is_full_monodromy(hs):
                    continue
                form, cert = canonicalize(hs)
                assert form == star
                assert serialize(cert.replay()) == serialize(star)
                done += 1

    def test_idempotent(self):
        star = canonical_star(3, 1, 6)
        form, cert = canonicalize(star)
        assert form == star
        assert cert.moves == ""

    def test_validate_mode_is_elementary(self):
        rng = random.Random(26)
        done = 0
        while done < 4:
            hs = random_system(3, 1, 6, rng)
            if not is_full_monodromy(hs):
                continue
            form, cert = canonicalize(hs, mode="validate")
            assert form == canonical_star(3, 1, 6)
            for token in cert.moves.split():
                assert token[0] in ("B", "P"), token
            assert serialize(cert.replay()) == serialize(form)
            done += 1

    def test_preconditions(self):
        rng = random.Random(27)
        with pytest.raises(NormalizeError, match="2d"):
            canonicalize(random_system(3, 1, 4, rng))
        t12 = transposition(3, 1, 2)
        not_full = HurwitzSystem(3, (), (t12,) * 6)
        with pytest.raises(NormalizeError, match="full monodromy"):
            canonicalize(not_full)
        broken = HurwitzSystem(3, (), (t12,) * 5)
        with pytest.raises(NormalizeError, match="valid"):
            canonicalize(broken)

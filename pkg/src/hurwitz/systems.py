"""Hurwitz systems: the permutation data of a simply branched cover.

A degree-d cover of a genus-h surface branched over w points, with the
fiber over the basepoint labeled 1..d, is the same thing as a tuple

    (a_1, b_1, ..., a_h, b_h; t_1, ..., t_w)

of permutations in S_d where every t_j is a transposition and the
surface relator holds:

    t_1 ... t_w [a_1,b_1] ... [a_h,b_h] = identity

with [x, y] = x y x^-1 y^-1 and products read left to right.  Tuples
are deliberately not quotiented by simultaneous conjugation; the
labeling is the rigidification that makes orbit enumeration exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Iterator

from .perms import (
    Perm,
    all_transpositions,
    check_perm,
    compose,
    format_perm,
    identity,
    inverse,
    is_symmetric,
    is_transposition,
    orbit_blocks,
    parse_perm,
    PermGroup,
    product,
    transposition_blocks,
)

ENUMERATION_GUARD = 10**9


@dataclass(frozen=True)
class HurwitzSystem:
    d: int
    handles: tuple[Perm, ...]  # a_1, b_1, a_2, b_2, ...
    transpositions: tuple[Perm, ...]

    @property
    def h(self) -> int:
        return len(self.handles) // 2

    @property
    def w(self) -> int:
        return len(self.transpositions)

    def handle_pair(self, i: int) -> tuple[Perm, Perm]:
        """(a_i, b_i), 1-based."""
        return self.handles[2 * i - 2], self.handles[2 * i - 1]


@dataclass(frozen=True)
class SystemReport:
    ok: bool
    messages: tuple[str, ...]


def commutator(x: Perm, y: Perm) -> Perm:
    return compose(compose(x, y), compose(inverse(x), inverse(y)))


def relator_product(sys: HurwitzSystem) -> Perm:
    acc = product(sys.transpositions, sys.d)
    for i in range(sys.h):
        acc = compose(acc, commutator(sys.handles[2 * i], sys.handles[2 * i + 1]))
    return acc


def validate(sys: HurwitzSystem) -> SystemReport:
    """Check every type invariant; report the first violation found."""
    msgs = []
    if sys.d < 1:
        msgs.append("degree must be at least 1, got %d" % sys.d)
    if not msgs and len(sys.handles) % 2 != 0:
        msgs.append("handles must come in (a_i, b_i) pairs, got %d entries" % len(sys.handles))
    if not msgs:
        for name, p in [("handle", p) for p in sys.handles] + [("transposition", p) for p in sys.transpositions]:
            try:
                check_perm(p)
            except ValueError as exc:
                msgs.append("bad %s entry: %s" % (name, exc))
                break
            if len(p) != sys.d:
                msgs.append("%s entry has degree %d, system has d=%d" % (name, len(p), sys.d))
                break
    if not msgs:
        for j, t in enumerate(sys.transpositions, start=1):
            if not is_transposition(t):
                msgs.append("t_%d is not a transposition: %s" % (j, format_perm(t)))
                break
    if not msgs and sys.w % 2 != 0:
        msgs.append("w must be even, got %d" % sys.w)
    if not msgs and relator_product(sys) != identity(sys.d):
        msgs.append("relator product is not the identity")
    return SystemReport(not msgs, tuple(msgs))


def genus(sys: HurwitzSystem) -> int:
    """Genus of the covering surface, by Riemann-Hurwitz with simple
    branching: g = d(h-1) + w/2 + 1."""
    return sys.d * (sys.h - 1) + sys.w // 2 + 1


def monodromy(sys: HurwitzSystem) -> PermGroup:
    return PermGroup(sys.handles + sys.transpositions, sys.d)


def is_full_monodromy(sys: HurwitzSystem) -> bool:
    # fast path: transpositions spanning a single block generate S_d
    # already, and that covers almost every system the censuses touch
    if sys.w > 0:
        blocks = orbit_blocks(sys.transpositions, sys.d)
        if len(blocks) == 1:
            return True
    return is_symmetric(sys.handles + sys.transpositions, sys.d)


def connected_cover(sys: HurwitzSystem) -> bool:
    return len(orbit_blocks(sys.handles + sys.transpositions, sys.d)) == 1


def branching_blocks(sys: HurwitzSystem, lo: int = 1, hi: int | None = None) -> list[tuple[int, ...]]:
    """Blocks of the branching monodromy group of the index window
    lo..hi (1-based, inclusive); the group itself is the direct product
    of symmetric groups on the blocks."""
    if hi is None:
        hi = sys.w
    if not (1 <= lo and hi <= sys.w and lo <= hi + 1):
        raise ValueError("window %d..%d out of range 1..%d" % (lo, hi, sys.w))
    return transposition_blocks(sys.transpositions[lo - 1 : hi], sys.d)


# ---------------------------------------------------------------------------
# serialization

def serialize(sys: HurwitzSystem) -> str:
    """Canonical one-line text form; its UTF-8 bytes are the SystemKey.
    Example: d=3 h=1 w=4 | t: 2,1,3 ; 1,3,2 ; 1,3,2 ; 2,1,3 | ab: 2,3,1 , 2,1,3
    """
    t_part = " ; ".join(format_perm(t) for t in sys.transpositions) or "-"
    ab_part = " , ".join(format_perm(p) for p in sys.handles) or "-"
    return "d=%d h=%d w=%d | t: %s | ab: %s" % (sys.d, sys.h, sys.w, t_part, ab_part)


class KeyParseError(ValueError):
    """Malformed system line; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__("%s (at offset %d)" % (message, offset))
        self.offset = offset


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def expect(self, token: str) -> None:
        if not self.text.startswith(token, self.pos):
            raise KeyParseError("expected %r" % token, self.pos)
        self.pos += len(token)

    def take_until(self, stop: str) -> str:
        end = self.text.find(stop, self.pos)
        if end < 0:
            end = len(self.text)
        piece = self.text[self.pos : end]
        self.pos = end
        return piece

    def take_int(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise KeyParseError("expected an integer", start)
        return int(self.text[start : self.pos])


def _parse_perm_field(field: str, start: int, sep: str, d: int) -> list[Perm]:
    out: list[Perm] = []
    offset = 0
    for piece in field.split(sep):
        try:
            p = parse_perm(piece.strip())
        except ValueError as exc:
            raise KeyParseError(str(exc), start + offset) from None
        if len(p) != d:
            raise KeyParseError("permutation degree %d, expected %d" % (len(p), d), start + offset)
        out.append(p)
        offset += len(piece) + len(sep)
    return out


def deserialize(key: str) -> HurwitzSystem:
    """Inverse of serialize; raises KeyParseError with a byte offset on
    malformed input.  Structure only: run validate on the result to
    check the relator and transposition shape."""
    cur = _Cursor(key)
    cur.expect("d=")
    d = cur.take_int()
    cur.expect(" h=")
    h = cur.take_int()
    cur.expect(" w=")
    w = cur.take_int()
    cur.expect(" | t: ")
    t_field = cur.take_until(" | ab: ")
    ts = [] if t_field == "-" else _parse_perm_field(t_field, cur.pos - len(t_field), " ; ", d)
    cur.expect(" | ab: ")
    ab_field = cur.take_until("\n")
    handles = [] if ab_field == "-" else _parse_perm_field(ab_field, cur.pos - len(ab_field), " , ", d)
    if cur.pos != len(key):
        raise KeyParseError("trailing garbage", cur.pos)
    if len(ts) != w:
        raise KeyParseError("w=%d but %d transpositions listed" % (w, len(ts)), 0)
    if len(handles) != 2 * h:
        raise KeyParseError("h=%d but %d handle entries listed" % (h, len(handles)), 0)
    return HurwitzSystem(d, tuple(handles), tuple(ts))


# ---------------------------------------------------------------------------
# enumeration

def _all_elements(d: int) -> list[Perm]:
    return [tuple(p) for p in permutations(range(1, d + 1))]


def _commutator_pairs(d: int) -> dict[Perm, list[tuple[Perm, Perm]]]:
    """All (x, y) in S_d x S_d grouped by [x, y], in lex order."""
    table: dict[Perm, list[tuple[Perm, Perm]]] = {}
    elems = _all_elements(d)
    for x in elems:
        for y in elems:
            table.setdefault(commutator(x, y), []).append((x, y))
    return table


def _handle_tuples(target: Perm, h: int, pairs: dict[Perm, list[tuple[Perm, Perm]]],
                   d: int) -> Iterator[tuple[Perm, ...]]:
    """All 2h-tuples whose commutator product, left to right, is target."""
    if h == 0:
        if target == identity(d):
            yield ()
        return
    if h == 1:
        for x, y in pairs.get(target, ()):
            yield (x, y)
        return
    for c1 in sorted(pairs):
        rest_target = compose(inverse(c1), target)
        first = pairs[c1]
        for tail in _handle_tuples(rest_target, h - 1, pairs, d):
            for x, y in first:
                yield (x, y) + tail


def _count_map_pow(base: dict[Perm, int], n: int, d: int) -> dict[Perm, int]:
    """n-fold convolution of a count map over S_d."""
    acc = {identity(d): 1}
    for _ in range(n):
        nxt: dict[Perm, int] = {}
        for p, cp in acc.items():
            for q, cq in base.items():
                key = compose(p, q)
                nxt[key] = nxt.get(key, 0) + cp * cq
        acc = nxt
    return acc


def count_systems(d: int, h: int, w: int) -> int:
    """Exact number of valid systems, by count-map convolution.  Cheap
    for d <= 6; the Frobenius character sum is the independent check."""
    if d > 6:
        raise ValueError("count_systems convolution is limited to d <= 6")
    t_map = {t: 1 for t in all_transpositions(d)}
    t_counts = _count_map_pow(t_map, w, d)
    if h == 0:
        return t_counts.get(identity(d), 0)
    comm_map: dict[Perm, int] = {}
    for c, lst in _commutator_pairs(d).items():
        comm_map[c] = len(lst)
    h_counts = _count_map_pow(comm_map, h, d)
    # t-product times commutator product must be the identity
    return sum(n * h_counts.get(inverse(p), 0) for p, n in t_counts.items())


def _estimate_count(d: int, h: int, w: int) -> int:
    if d <= 6:
        return count_systems(d, h, w)
    nt = d * (d - 1) // 2
    fact = 1
    for k in range(2, d + 1):
        fact *= k
    return nt**w * fact ** max(2 * h - 1, 0)


def enumerate_systems(d: int, h: int, w: int,
                      filter: Callable[[HurwitzSystem], bool] | None = None
                      ) -> Iterator[HurwitzSystem]:
    """Every valid system with these parameters exactly once, in a
    fixed deterministic order (lex on the transposition tuple, then on
    handles).  Refuses when the estimated output size exceeds the
    enumeration guard."""
    est = _estimate_count(d, h, w)
    if est > ENUMERATION_GUARD:
        raise ValueError("enumeration would produce about %d systems, over the %d guard"
                         % (est, ENUMERATION_GUARD))
    trans = all_transpositions(d)
    pairs = _commutator_pairs(d) if h > 0 else {}
    ident = identity(d)

    def rec(prefix: list[Perm], prod: Perm) -> Iterator[HurwitzSystem]:
        if h == 0 and len(prefix) == w - 1:
            # the last transposition is forced by the relator
            last = inverse(prod)
            if is_transposition(last):
                sys = HurwitzSystem(d, (), tuple(prefix) + (last,))
                if filter is None or filter(sys):
                    yield sys
            return
        if len(prefix) == w:
            target = inverse(prod)
            for handles in _handle_tuples(target, h, pairs, d):
                sys = HurwitzSystem(d, handles, tuple(prefix))
                if filter is None or filter(sys):
                    yield sys
            return
        for t in trans:
            prefix.append(t)
            yield from rec(prefix, compose(prod, t))
            prefix.pop()

    if w == 0 and h == 0:
        sys = HurwitzSystem(d, (), ())
        if filter is None or filter(sys):
            yield sys
        return
    if w == 0:
        yield from rec([], ident)
        return
    if w % 2 != 0:
        return
    yield from rec([], ident)


def random_system(d: int, h: int, w: int, rng,
                  filter: Callable[[HurwitzSystem], bool] | None = None,
                  max_tries: int = 100000) -> HurwitzSystem:
    """Uniform over valid systems (each system has exactly one free
    choice of the first w-1 transpositions and the handles, so
    rejection sampling is exact), optionally conditioned on filter."""
    if w < 1 or w % 2 != 0:
        raise ValueError("need even w >= 2 to sample")
    trans = all_transpositions(d)
    elems = _all_elements(d) if h > 0 else []
    for _ in range(max_tries):
        handles = tuple(rng.choice(elems) for _ in range(2 * h))
        ts = [rng.choice(trans) for _ in range(w - 1)]
        comm = identity(d)
        for i in range(h):
            comm = compose(comm, commutator(handles[2 * i], handles[2 * i + 1]))
        # t_1..t_w * comm = id forces t_w = prefix^-1 * comm^-1
        last = compose(inverse(product(ts, d)), inverse(comm))
        if not is_transposition(last):
            continue
        sys = HurwitzSystem(d, handles, tuple(ts) + (last,))
        if filter is None or filter(sys):
            return sys
    raise RuntimeError("rejection sampling failed after %d tries" % max_tries)

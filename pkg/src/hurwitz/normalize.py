"""Constructive normalization of Hurwitz systems.

The pipeline turns any full-monodromy system with w >= 2d into the one
canonical system of its parameters, recording a replayable move word:

  1. sort the transpositions into contiguous branching blocks,
  2. rewrite one block into a split normal form ending in a doubled
     transposition, retype that pair to straddle two blocks, repeat
     until the branching monodromy is all of S_d,
  3. kill the handle entries pairwise: stage the doubled transposition
     that the next point-push will multiply into the handle, push, and
     watch the total handle weight drop by one each round,
  4. finish with a pure braid rewrite onto the star-shaped tuple.

Step counts are uniformly bounded (no search is involved in fast
mode), so canonicalization is linear time for fixed parameters.  The
block rewrites are justified by braid-orbit transitivity on full
blocks; validate mode realizes each one as an explicit braid word by
bidirectional search and fails loudly if the orbits do not match.
"""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import certified_push_endo
from .moves import (
    Certificate,
    MoveError,
    apply_word,
    braid,
    certificate,
    evaluate_word,
    handle_push,
    pair_retype,
)
from .perms import (
    Perm,
    conjugate,
    cycles,
    format_perm,
    identity,
    is_transposition,
    product,
    support,
    transposition,
    weight,
)
from .systems import (
    HurwitzSystem,
    branching_blocks,
    is_full_monodromy,
    serialize,
    validate,
)


class NormalizeError(Exception):
    """Precondition failure or a counterexample to the orbit claims;
    the message carries the offending system line."""


class OrbitMismatchError(NormalizeError):
    """Two window tuples proved to lie in different braid orbits."""


class BudgetExceededError(NormalizeError):
    """Search stopped before reaching an answer either way."""


# ---------------------------------------------------------------------------
# sorting into standard position

def sort_standard_position(sys: HurwitzSystem) -> tuple[HurwitzSystem, list[str]]:
    """Bubble the transpositions into contiguous blocks, ordered by the
    least point of each block, stably, using only braid moves on
    disjoint adjacent entries (which act as plain swaps)."""
    blocks = branching_blocks(sys)
    where = {}
    for idx, blk in enumerate(blocks):
        for pt in blk:
            where[pt] = idx
    keys = [where[support(t)[0]] for t in sys.transpositions]
    tokens: list[str] = []
    changed = True
    while changed:
        changed = False
        for j in range(sys.w - 1):
            if keys[j] > keys[j + 1]:
                # different blocks, hence disjoint supports
                sys = braid(sys, j + 1)
                keys[j], keys[j + 1] = keys[j + 1], keys[j]
                tokens.append("B%d" % (j + 1))
                changed = True
    return sys, tokens


# ---------------------------------------------------------------------------
# split normal form of one block

def prop_split_normal_form(points: tuple[int, ...], g: Perm, w_m: int,
                           tau: Perm) -> tuple[Perm, ...]:
    """w_m transpositions supported on points, multiplying to g,
    generating the full symmetric group on points, ending in a run of
    tau with at least two copies.

    The body spells g cycle by cycle as reversed adjacent chains
    (longest cycle first), joins consecutive cycles by doubled
    connector transpositions between their least elements, and pads
    with copies of tau.  The body length is #points + s - 2 where s
    counts the cycles of g on points including fixed ones.
    """
    d = len(g)
    pts = tuple(sorted(points))
    n = len(pts)
    if n < 2:
        raise NormalizeError("split normal form needs at least two points")
    pset = set(pts)
    if any(x not in pset for x in support(g)):
        raise NormalizeError("product %s moves points outside the block" % format_perm(g))
    if not is_transposition(tau) or any(x not in pset for x in support(tau)):
        raise NormalizeError("tail entry must be a transposition inside the block")
    if w_m < 2 * n:
        raise NormalizeError("length %d is below 2#points = %d" % (w_m, 2 * n))
    comps = [c for c in cycles(g) if c[0] in pset]
    comps.sort(key=lambda c: (-len(c), c[0]))
    s = len(comps)
    length = n + s - 2
    if (w_m - length) % 2 != 0:
        raise NormalizeError("parity mismatch: length %d cannot reach the body length %d"
                             % (w_m, length))
    out: list[Perm] = []
    for idx, cyc in enumerate(comps):
        # reversed chain: (c_{k-1} c_k), ..., (c_1 c_2) multiplies to the cycle
        for a, b in zip(cyc[-2::-1], cyc[:0:-1]):
            out.append(transposition(d, a, b))
        if idx + 1 < len(comps):
            conn = transposition(d, cyc[0], comps[idx + 1][0])
            out.extend((conn, conn))
    out.extend([tau] * (w_m - length))
    assert len(out) == w_m
    assert product(out, d) == g
    return tuple(out)


# ---------------------------------------------------------------------------
# braid realization of a window rewrite

def _window_neighbors(ts: tuple[Perm, ...]) -> list[tuple[tuple[Perm, ...], str]]:
    out = []
    for j in range(len(ts) - 1):
        s, t = ts[j], ts[j + 1]
        out.append((ts[:j] + (t, conjugate(s, t)) + ts[j + 2 :], "B%d" % (j + 1)))
        out.append((ts[:j] + (conjugate(t, s), s) + ts[j + 2 :], "B%d'" % (j + 1)))
    return out


def realize_block_rewrite(sys: HurwitzSystem, lo: int, hi: int,
                          target: tuple[Perm, ...],
                          budget: int = 2_000_000) -> list[str]:
    """Braid word carrying the window lo..hi onto target, found by
    bidirectional breadth-first search.  Exhausting both frontiers
    without meeting proves the tuples lie in different braid orbits,
    which the callers treat as a hard counterexample."""
    src = sys.transpositions[lo - 1 : hi]
    if len(target) != len(src):
        raise NormalizeError("rewrite target has %d entries for a %d-entry window"
                             % (len(target), len(src)))
    if product(src, sys.d) != product(target, sys.d):
        raise OrbitMismatchError("window products differ, no braid word can exist")
    if src == target:
        return []
    sides = ({src: []}, {target: []})  # state -> move list from that end
    frontiers = ([src], [target])
    seen = 0
    while frontiers[0] and frontiers[1]:
        # expand the smaller frontier, deterministically ordered
        pick = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        visited, other = sides[pick], sides[1 - pick]
        new_frontier = []
        for state in sorted(frontiers[pick]):
            base = visited[state]
            for nxt, token in _window_neighbors(state):
                if nxt in visited:
                    continue
                seen += 1
                if seen > budget:
                    raise BudgetExceededError("rewrite search exceeded %d states" % budget)
                visited[nxt] = base + [token]
                if nxt in other:
                    fwd = visited[nxt] if pick == 0 else other[nxt]
                    bwd = other[nxt] if pick == 0 else visited[nxt]
                    tokens = fwd + _invert_tokens(bwd)
                    return _offset_tokens(tokens, lo - 1)
                new_frontier.append(nxt)
        frontiers = (new_frontier, frontiers[1]) if pick == 0 else (frontiers[0], new_frontier)
    raise OrbitMismatchError(
        "window %d..%d of %s cannot be braided to %s" %
        (lo, hi, serialize(sys), " ; ".join(format_perm(t) for t in target)))


def _invert_tokens(tokens: list[str]) -> list[str]:
    out = []
    for token in reversed(tokens):
        out.append(token[:-1] if token.endswith("'") else token + "'")
    return out


def _offset_tokens(tokens: list[str], shift: int) -> list[str]:
    out = []
    for token in tokens:
        prime = token.endswith("'")
        j = int(token.rstrip("'")[1:])
        out.append("B%d%s" % (j + shift, "'" if prime else ""))
    return out


def check_block_rewrite(sys: HurwitzSystem, lo: int, hi: int,
                        target: tuple[Perm, ...]) -> None:
    """Cheap braid-orbit invariants for a macro rewrite token: equal
    products and equal window subgroup (same block partition)."""
    src = sys.transpositions[lo - 1 : hi]
    if product(src, sys.d) != product(target, sys.d):
        raise MoveError("rewrite changes the window product")
    for t in target:
        if not is_transposition(t):
            raise MoveError("rewrite target entry is not a transposition")
    from .perms import orbit_blocks

    if orbit_blocks(src, sys.d) != orbit_blocks(target, sys.d):
        raise MoveError("rewrite changes the window block partition")


def _apply_rewrite(sys: HurwitzSystem, lo: int, hi: int, target: tuple[Perm, ...],
                   tokens: list[str], mode: str) -> HurwitzSystem:
    """Replace the window, as a macro token in fast mode or through an
    explicit braid realization in validate mode."""
    if sys.transpositions[lo - 1 : hi] == target:
        return sys
    if mode == "validate":
        braid_tokens = realize_block_rewrite(sys, lo, hi, target)
        new = sys
        for token in braid_tokens:
            prime = token.endswith("'")
            new = braid(new, int(token.rstrip("'")[1:]), prime)
        if new.transpositions[lo - 1 : hi] != target:
            raise NormalizeError("braid realization missed its target")
        tokens.extend(braid_tokens)
        return new
    check_block_rewrite(sys, lo, hi, target)
    tokens.append("W%d-%d:%s" % (lo, hi, ";".join(format_perm(t) for t in target)))
    return HurwitzSystem(sys.d, sys.handles, sys.transpositions[: lo - 1] + target + sys.transpositions[hi:])


def _apply_retype(sys: HurwitzSystem, j: int, tau: Perm,
                  tokens: list[str], mode: str) -> HurwitzSystem:
    """Retype the pair at j.  In fast mode this is a macro token; in
    validate mode its effect is realized as an explicit elementary-move
    word by bidirectional search (the macro is justified into the full
    move orbit, not the braid orbit, so point-pushes may appear)."""
    new = pair_retype(sys, j, tau)
    if mode == "validate":
        from .orbits import connect

        cert = connect(sys, new, "full")
        if cert is None:
            raise NormalizeError("retype at %d of %s is not realizable by elementary moves"
                                 % (j, serialize(sys)))
        tokens.extend(cert.moves.split())
        return new
    tokens.append("R%d:%s" % (j, format_perm(tau)))
    return new


# ---------------------------------------------------------------------------
# branching repair: make the transpositions generate all of S_d

def repair_branching_monodromy(sys: HurwitzSystem,
                               mode: str = "fast") -> tuple[HurwitzSystem, list[str]]:
    """Merge the branching blocks until the transpositions alone
    generate S_d, by rewriting a long enough block into split normal
    form and retyping its doubled tail across a block boundary.  Needs
    w >= 2d so that a block with w_m >= 2#A_m always exists, and full
    monodromy so the retype preconditions hold."""
    if sys.w < 2 * sys.d:
        raise NormalizeError("branching repair needs w >= 2d, got w=%d d=%d" % (sys.w, sys.d))
    if not is_full_monodromy(sys):
        raise NormalizeError("branching repair needs full monodromy: %s" % serialize(sys))
    tokens: list[str] = []
    while True:
        blocks = branching_blocks(sys)
        if len(blocks) == 1:
            return sys, tokens
        sys, sort_tokens = sort_standard_position(sys)
        tokens.extend(sort_tokens)
        blocks = branching_blocks(sys)
        index = {}
        for bi, blk in enumerate(blocks):
            for pt in blk:
                index[pt] = bi
        counts = [0] * len(blocks)
        for t in sys.transpositions:
            counts[index[support(t)[0]]] += 1
        chosen = next(bi for bi, blk in enumerate(blocks)
                      if counts[bi] >= 2 * len(blk))
        lo = 1 + sum(counts[:chosen])
        hi = lo + counts[chosen] - 1
        blk = blocks[chosen]
        window_product = product(sys.transpositions[lo - 1 : hi], sys.d)
        tau = transposition(sys.d, blk[0], blk[1])
        normal = prop_split_normal_form(blk, window_product, counts[chosen], tau)
        sys = _apply_rewrite(sys, lo, hi, normal, tokens, mode)
        partner = blocks[chosen + 1] if chosen + 1 < len(blocks) else blocks[chosen - 1]
        bridge = transposition(sys.d, blk[0], partner[0])
        sys = _apply_retype(sys, hi - 1, bridge, tokens, mode)


# ---------------------------------------------------------------------------
# handle trivialization by staged point-pushes

def _push_conjugator(sys: HurwitzSystem, i: int, side: str) -> Perm:
    """Monodromy image of the conjugator in front of the g letter of
    the push's rewritten handle image.  The schema guarantees the
    conjugator contains no g letter, so the value only depends on the
    handle entries, which staging never touches."""
    e = certified_push_endo(sys.h, sys.w, i, side)
    ctx = e.ctx
    moved = ctx.b(i) if side == "a" else ctx.a(i)
    image = e.image(moved)
    assert image[0] == moved, "forward push image must start with the moved letter"
    tail = image[1:]
    g_letter = ctx.g(sys.w)
    positions = [k for k, letter in enumerate(tail) if abs(letter) == g_letter]
    assert len(positions) == 1, "push image must contain the last puncture exactly once"
    return evaluate_word(tail[: positions[0]], sys)


def trivialize_handle(sys: HurwitzSystem, i: int,
                      mode: str = "fast") -> tuple[HurwitzSystem, list[str]]:
    """Drive the entries of handle i to the identity.

    Each round repairs the branching monodromy, stages the whole
    transposition tuple so it ends in a doubled copy of the right
    transposition, and pushes the last puncture around one loop of the
    handle.  The staged transposition is chosen so the push multiplies
    the rewritten handle entry by a cycle-splitting transposition: the
    total handle weight drops by exactly one per push, so at most
    2(d-1) pushes happen."""
    tokens: list[str] = []
    rounds = 0
    while True:
        lam, mu = sys.handle_pair(i)
        if weight(lam) + weight(mu) == 0:
            return sys, tokens
        if rounds > 2 * (sys.d - 1):
            raise NormalizeError("handle trivialization exceeded its push bound on %s"
                                 % serialize(sys))
        rounds += 1
        # side a rewrites b_i, side b rewrites a_i
        side = "a" if weight(mu) > 0 else "b"
        moved_img = mu if side == "a" else lam
        x = support(moved_img)[0]
        splitter = transposition(sys.d, x, moved_img[x - 1])
        v = _push_conjugator(sys, i, side)
        # the push multiplies the handle entry by v t_w v^-1
        tau = conjugate(splitter, v)
        sys, repair_tokens = repair_branching_monodromy(sys, mode)
        tokens.extend(repair_tokens)
        staged = prop_split_normal_form(tuple(range(1, sys.d + 1)),
                                        product(sys.transpositions, sys.d),
                                        sys.w, tau)
        sys = _apply_rewrite(sys, 1, sys.w, staged, tokens, mode)
        before = weight(lam) + weight(mu)
        sys = handle_push(sys, i, side)
        tokens.append("P%s%d" % (side, i))
        lam2, mu2 = sys.handle_pair(i)
        if weight(lam2) + weight(mu2) != before - 1:
            raise NormalizeError("staged push failed to reduce the handle weight on %s"
                                 % serialize(sys))


# ---------------------------------------------------------------------------
# full canonicalization

def canonical_star(d: int, h: int, w: int) -> HurwitzSystem:
    """The canonical system: identity handles, w - 2(d-2) copies of
    (1 2), then a doubled copy of each (1 k) for k = 3..d."""
    if d < 2 or w % 2 != 0 or w < 2 * d:
        raise NormalizeError("no canonical system for d=%d h=%d w=%d" % (d, h, w))
    ts = [transposition(d, 1, 2)] * (w - 2 * (d - 2))
    for k in range(3, d + 1):
        t = transposition(d, 1, k)
        ts.extend((t, t))
    handles = (identity(d),) * (2 * h)
    return HurwitzSystem(d, handles, tuple(ts))


def canonicalize(sys: HurwitzSystem,
                 mode: str = "fast") -> tuple[HurwitzSystem, Certificate]:
    """Carry a full-monodromy system with w >= 2d to the canonical
    system of its parameters; the certificate replays move by move.
    Raises NormalizeError with the offending system line if any stage
    cannot make progress, which would be a counterexample to the
    single-orbit claim."""
    report = validate(sys)
    if not report.ok:
        raise NormalizeError("not a valid system: %s" % report.messages[0])
    if sys.d < 2:
        raise NormalizeError("canonicalization needs d >= 2")
    if sys.w < 2 * sys.d:
        raise NormalizeError("canonicalization needs w >= 2d, got w=%d d=%d" % (sys.w, sys.d))
    if not is_full_monodromy(sys):
        raise NormalizeError("canonicalization needs full monodromy: %s" % serialize(sys))
    start = sys
    tokens: list[str] = []
    for i in range(sys.h, 0, -1):
        sys, more = trivialize_handle(sys, i, mode)
        tokens.extend(more)
    sys, more = repair_branching_monodromy(sys, mode)
    tokens.extend(more)
    star = canonical_star(sys.d, sys.h, sys.w)
    sys = _apply_rewrite(sys, 1, sys.w, star.transpositions, tokens, mode)
    if sys != star:
        raise NormalizeError("canonicalization ended at %s, not the canonical system"
                             % serialize(sys))
    word = " ".join(tokens)
    cert = certificate(start, word, sys)
    if apply_word(start, word) != sys:
        raise NormalizeError("canonicalization certificate failed to replay")
    return sys, cert

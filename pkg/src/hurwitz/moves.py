"""Moves on Hurwitz systems.

Every move is the permutation shadow of a certified mapping class:
the new system is obtained by evaluating the free-group images of the
schema under the current monodromy.  Braid moves only shuffle the
transposition tuple; handle point-pushes also rewrite one handle
entry.  The pair macros (retype, cancel, insert) are shortcuts for
braid words whose existence needs a full residual monodromy group;
their preconditions are checked on application and again on replay.

Move words are strings of tokens separated by spaces:

    B3       braid at positions 3,4          B3'    its inverse
    Pa2      push along a_2 (rewrites b_2)   Pb1'   inverse push along b_1
    R4:1,3,2     retype the equal pair at 4,5 to the given transposition
    C2           cancel the equal pair at 2,3 (w drops by 2)
    I2:2,1,3     insert a doubled transposition at position 2
    W2-5:...     rewrite the window 2..5 (';'-separated transpositions)
"""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import catalog_hash, certified_braid_endo, certified_push_endo
from .perms import (
    Perm,
    compose,
    conjugate,
    format_perm,
    identity,
    inverse,
    is_symmetric,
    is_transposition,
    parse_perm,
)
from .systems import HurwitzSystem, relator_product, serialize
from .words import EndoMap, Word


class MoveError(ValueError):
    """Move out of range or precondition violated."""


def evaluate_word(word: Word, sys: HurwitzSystem) -> Perm:
    """Monodromy image of a free-group word, left to right."""
    acc = identity(sys.d)
    two_h = 2 * sys.h
    for letter in word:
        k = abs(letter)
        p = sys.handles[k - 1] if k <= two_h else sys.transpositions[k - two_h - 1]
        acc = compose(acc, p if letter > 0 else inverse(p))
    return acc


def apply_endo(sys: HurwitzSystem, e: EndoMap) -> HurwitzSystem:
    """Evaluate every generator image; the workhorse behind pushes."""
    two_h = 2 * sys.h
    handles = tuple(evaluate_word(e.images[k], sys) for k in range(two_h))
    ts = tuple(evaluate_word(e.images[two_h + j], sys) for j in range(sys.w))
    return HurwitzSystem(sys.d, handles, ts)


# ---------------------------------------------------------------------------
# elementary moves

def braid(sys: HurwitzSystem, j: int, inverse_move: bool = False) -> HurwitzSystem:
    """Braid the punctures j, j+1 (1-based).

    Forward: (s, t) -> (t, t^-1 s t).  Inverse: (s, t) -> (s t s^-1, s).
    Transpositions are involutions, so conjugation needs no inverses.
    """
    if not 1 <= j <= sys.w - 1:
        raise MoveError("braid position %d out of range 1..%d" % (j, sys.w - 1))
    s, t = sys.transpositions[j - 1], sys.transpositions[j]
    if inverse_move:
        pair = (conjugate(t, s), s)
    else:
        pair = (t, conjugate(s, t))
    ts = sys.transpositions[: j - 1] + pair + sys.transpositions[j + 1 :]
    return HurwitzSystem(sys.d, sys.handles, ts)


def handle_push(sys: HurwitzSystem, i: int, side: str,
                inverse_move: bool = False) -> HurwitzSystem:
    """Push the last puncture around a loop of handle i.

    The result is checked on the spot: relator restored, only t_w and
    the opposite loop of handle i move, t_w stays a transposition, and
    the handle entry changes by right multiplication by a conjugate of
    a transposition.  The deeper guarantees (exact inverse, monodromy
    group unchanged) follow from the schema certificate; run
    check_push_contract for the expensive direct confirmation.
    """
    if sys.w < 1:
        raise MoveError("point-push needs at least one puncture")
    if not 1 <= i <= sys.h:
        raise MoveError("handle index %d out of range 1..%d" % (i, sys.h))
    if side not in ("a", "b"):
        raise MoveError("push side must be 'a' or 'b', got %r" % side)
    e = certified_push_endo(sys.h, sys.w, i, side)
    if inverse_move:
        e = e.inverse()
    new = apply_endo(sys, e)
    _check_push_cheap(sys, new, i, side)
    return new


def _check_push_cheap(sys: HurwitzSystem, new: HurwitzSystem, i: int, side: str) -> None:
    if relator_product(new) != identity(sys.d):
        raise MoveError("push broke the relator")
    if new.transpositions[:-1] != sys.transpositions[:-1]:
        raise MoveError("push moved a puncture entry other than the last")
    if not is_transposition(new.transpositions[-1]):
        raise MoveError("push image of t_w is not a transposition")
    # handles index of the rewritten loop: side a rewrites b_i, side b rewrites a_i
    moved = 2 * i - 1 if side == "a" else 2 * i - 2
    for k, (old_p, new_p) in enumerate(zip(sys.handles, new.handles)):
        if k == moved:
            delta = compose(inverse(old_p), new_p)
            if not is_transposition(delta):
                raise MoveError("rewritten handle entry did not move by a transposition")
        elif old_p != new_p:
            raise MoveError("push moved handle entry %d unexpectedly" % (k + 1))


def check_push_contract(sys: HurwitzSystem, i: int, side: str) -> HurwitzSystem:
    """Apply the push and confirm the full contract directly: the
    catalog inverse really undoes it and the monodromy subgroup is
    unchanged as a set, not merely up to isomorphism."""
    from .perms import PermGroup

    new = handle_push(sys, i, side)
    back = handle_push(new, i, side, inverse_move=True)
    if back != sys:
        raise MoveError("inverse push failed to restore the system")
    old_group = PermGroup(sys.handles + sys.transpositions, sys.d)
    new_group = PermGroup(new.handles + new.transpositions, sys.d)
    if old_group.order() != new_group.order():
        raise MoveError("push changed the monodromy group order")
    for p in new.handles + new.transpositions:
        if p not in old_group:
            raise MoveError("push left the monodromy subgroup")
    return new


# ---------------------------------------------------------------------------
# pair macros

def _residual_full(sys: HurwitzSystem, skip: tuple[int, ...]) -> bool:
    gens = sys.handles + tuple(t for j, t in enumerate(sys.transpositions, start=1)
                               if j not in skip)
    return is_symmetric(gens, sys.d)


def _require_equal_pair(sys: HurwitzSystem, j: int) -> Perm:
    if not 1 <= j <= sys.w - 1:
        raise MoveError("pair position %d out of range 1..%d" % (j, sys.w - 1))
    t = sys.transpositions[j - 1]
    if sys.transpositions[j] != t:
        raise MoveError("entries %d, %d are not an equal pair" % (j, j + 1))
    return t


def pair_retype(sys: HurwitzSystem, j: int, tau: Perm) -> HurwitzSystem:
    """Replace the doubled transposition at j, j+1 by (tau, tau).

    Sound only when the remaining entries already generate the full
    symmetric group; the replacement is then realizable by braid moves
    alone, so the orbit does not change.
    """
    _require_equal_pair(sys, j)
    if not is_transposition(tau):
        raise MoveError("retype target is not a transposition")
    if not _residual_full(sys, (j, j + 1)):
        raise MoveError("pair retype needs full residual monodromy")
    ts = sys.transpositions[: j - 1] + (tau, tau) + sys.transpositions[j + 1 :]
    return HurwitzSystem(sys.d, sys.handles, ts)


def pair_cancel(sys: HurwitzSystem, j: int) -> HurwitzSystem:
    """Drop the doubled transposition at j, j+1; w shrinks by two."""
    _require_equal_pair(sys, j)
    if not _residual_full(sys, (j, j + 1)):
        raise MoveError("pair cancel needs full residual monodromy")
    ts = sys.transpositions[: j - 1] + sys.transpositions[j + 1 :]
    return HurwitzSystem(sys.d, sys.handles, ts)


def pair_insert(sys: HurwitzSystem, j: int, tau: Perm) -> HurwitzSystem:
    """Insert (tau, tau) before position j (j = w+1 appends); the
    inverse of pair_cancel, so the same residual condition applies,
    which here means the system itself has full monodromy."""
    if not 1 <= j <= sys.w + 1:
        raise MoveError("insert position %d out of range 1..%d" % (j, sys.w + 1))
    if not is_transposition(tau):
        raise MoveError("insert entry is not a transposition")
    if not is_symmetric(sys.handles + sys.transpositions, sys.d):
        raise MoveError("pair insert needs full monodromy")
    ts = sys.transpositions[: j - 1] + (tau, tau) + sys.transpositions[j - 1 :]
    return HurwitzSystem(sys.d, sys.handles, ts)


# ---------------------------------------------------------------------------
# move words

@dataclass(frozen=True)
class Move:
    """A parsed move token."""

    kind: str  # braid | push | retype | cancel | insert | rewrite
    j: int = 0
    side: str = ""
    inverse: bool = False
    perms: tuple[Perm, ...] = ()
    hi: int = 0

    def token(self) -> str:
        prime = "'" if self.inverse else ""
        if self.kind == "braid":
            return "B%d%s" % (self.j, prime)
        if self.kind == "push":
            return "P%s%d%s" % (self.side, self.j, prime)
        if self.kind == "retype":
            return "R%d:%s" % (self.j, format_perm(self.perms[0]))
        if self.kind == "cancel":
            return "C%d" % self.j
        if self.kind == "insert":
            return "I%d:%s" % (self.j, format_perm(self.perms[0]))
        return "W%d-%d:%s" % (self.j, self.hi, ";".join(format_perm(p) for p in self.perms))

    def inverted(self) -> "Move":
        if self.kind in ("braid", "push"):
            return Move(self.kind, self.j, self.side, not self.inverse, self.perms, self.hi)
        raise MoveError("no token-level inverse for %s" % self.kind)


def _move_index(text: str) -> int:
    j = int(text)
    if j < 1:
        raise MoveError("move positions are 1-based, got %d" % j)
    return j


def parse_move(token: str) -> Move:
    text = token.strip()
    if not text:
        raise MoveError("empty move token")
    inverse_move = text.endswith("'")
    if inverse_move:
        text = text[:-1]
    try:
        if text.startswith("B"):
            return Move("braid", _move_index(text[1:]), inverse=inverse_move)
        if text.startswith("Pa") or text.startswith("Pb"):
            return Move("push", _move_index(text[2:]), side=text[1], inverse=inverse_move)
        if inverse_move:
            raise MoveError("macro tokens take no inverse marker")
        if text.startswith("R"):
            pos, _, perm = text[1:].partition(":")
            return Move("retype", _move_index(pos), perms=(parse_perm(perm),))
        if text.startswith("C"):
            return Move("cancel", _move_index(text[1:]))
        if text.startswith("I"):
            pos, _, perm = text[1:].partition(":")
            return Move("insert", _move_index(pos), perms=(parse_perm(perm),))
        if text.startswith("W"):
            span, _, body = text[1:].partition(":")
            lo, _, hi = span.partition("-")
            perms = tuple(parse_perm(p) for p in body.split(";"))
            if int(hi) < int(lo):
                raise MoveError("empty rewrite window %s" % token)
            return Move("rewrite", _move_index(lo), perms=perms, hi=int(hi))
    except MoveError:
        raise
    except ValueError:
        pass
    raise MoveError("unreadable move token %r" % token)


def apply_move(sys: HurwitzSystem, move: Move) -> HurwitzSystem:
    if move.kind == "braid":
        return braid(sys, move.j, move.inverse)
    if move.kind == "push":
        return handle_push(sys, move.j, move.side, move.inverse)
    if move.kind == "retype":
        return pair_retype(sys, move.j, move.perms[0])
    if move.kind == "cancel":
        return pair_cancel(sys, move.j)
    if move.kind == "insert":
        return pair_insert(sys, move.j, move.perms[0])
    if move.kind == "rewrite":
        lo, hi = move.j, move.hi
        if not (1 <= lo <= hi <= sys.w and len(move.perms) == hi - lo + 1):
            raise MoveError("rewrite window %d-%d malformed" % (lo, hi))
        from .normalize import check_block_rewrite

        check_block_rewrite(sys, lo, hi, move.perms)
        ts = sys.transpositions[: lo - 1] + move.perms + sys.transpositions[hi:]
        return HurwitzSystem(sys.d, sys.handles, ts)
    raise MoveError("unknown move kind %r" % move.kind)


def apply_word(sys: HurwitzSystem, word: str) -> HurwitzSystem:
    for token in word.split():
        sys = apply_move(sys, parse_move(token))
    return sys


@dataclass(frozen=True)
class Certificate:
    """A replayable witness that two systems are connected by moves."""

    start: str  # system line
    moves: str  # space-separated move tokens
    end: str
    catalog: str  # schema file hash the moves were generated under

    def replay(self) -> HurwitzSystem:
        from .systems import deserialize

        if self.catalog != catalog_hash():
            raise MoveError("certificate was issued under a different move catalog")
        sys = deserialize(self.start)
        sys = apply_word(sys, self.moves)
        if serialize(sys) != self.end:
            raise MoveError("certificate replay reached %s, expected %s"
                            % (serialize(sys), self.end))
        return sys


def certificate(start: HurwitzSystem, moves: str, end: HurwitzSystem) -> Certificate:
    return Certificate(serialize(start), moves, serialize(end), catalog_hash())

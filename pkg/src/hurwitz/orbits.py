"""Orbit enumeration over the move catalog.

Exhaustive breadth-first floods answer the connectivity questions
exactly: a census partitions every system with given parameters into
move orbits, and connect searches for an explicit path between two
systems.  Everything here is deterministic by construction: frontiers
are processed in sorted key order, discoveries are merged by least
predecessor, and the result is independent of worker count (workers
only split the frontier; the merge is ordered).  Budgets make long
runs interruptible: a partial result is flagged, never silently
truncated.
"""

from __future__ import annotations

import json
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .catalog import catalog_hash, certified_push_endo
from .moves import Certificate, certificate
from .perms import Perm, compose, conjugate, identity, inverse
from .systems import (
    HurwitzSystem,
    enumerate_systems,
    is_full_monodromy,
    serialize,
)


class BudgetError(Exception):
    """The state budget ran out before the answer was decided."""


# ---------------------------------------------------------------------------
# compiled move sets

@dataclass(frozen=True)
class CompiledMove:
    token: str
    inverse_token: str
    apply: Callable[[HurwitzSystem], HurwitzSystem]


def _braid_fn(j: int, inverse_move: bool):
    def fn(sys: HurwitzSystem) -> HurwitzSystem:
        s, t = sys.transpositions[j - 1], sys.transpositions[j]
        pair = (conjugate(t, s), s) if inverse_move else (t, conjugate(s, t))
        return HurwitzSystem(sys.d, sys.handles,
                             sys.transpositions[: j - 1] + pair + sys.transpositions[j + 1 :])
    return fn


def _push_fn(h: int, w: int, i: int, side: str, inverse_move: bool):
    e = certified_push_endo(h, w, i, side)
    if inverse_move:
        e = e.inverse()
    moved = 2 * i if side == "a" else 2 * i - 1  # 1-based letter index
    g_word = e.images[2 * h + w - 1]
    moved_word = e.images[moved - 1]
    two_h = 2 * h

    def fn(sys: HurwitzSystem) -> HurwitzSystem:
        def ev(word) -> Perm:
            acc = identity(sys.d)
            for letter in word:
                k = abs(letter)
                p = sys.handles[k - 1] if k <= two_h else sys.transpositions[k - two_h - 1]
                acc = compose(acc, p if letter > 0 else inverse(p))
            return acc

        handles = list(sys.handles)
        handles[moved - 1] = ev(moved_word)
        ts = sys.transpositions[:-1] + (ev(g_word),)
        return HurwitzSystem(sys.d, tuple(handles), ts)
    return fn


def compile_moves(d: int, h: int, w: int, selector: str = "full") -> tuple[CompiledMove, ...]:
    """The neighbor generators for these parameters.  selector picks
    "braid" (tuple shuffles only) or "full" (braids and point-pushes).
    Every move's inverse is also in the set, so orbits are symmetric.
    """
    if selector not in ("braid", "full"):
        raise ValueError("move selector must be 'braid' or 'full', got %r" % selector)
    out: list[CompiledMove] = []
    for j in range(1, w):
        out.append(CompiledMove("B%d" % j, "B%d'" % j, _braid_fn(j, False)))
        out.append(CompiledMove("B%d'" % j, "B%d" % j, _braid_fn(j, True)))
    if selector == "full" and w >= 1:
        for i in range(1, h + 1):
            for side in ("a", "b"):
                out.append(CompiledMove("P%s%d" % (side, i), "P%s%d'" % (side, i),
                                        _push_fn(h, w, i, side, False)))
                out.append(CompiledMove("P%s%d'" % (side, i), "P%s%d" % (side, i),
                                        _push_fn(h, w, i, side, True)))
    return tuple(out)


# ---------------------------------------------------------------------------
# breadth-first orbit flood

@dataclass
class OrbitResult:
    seed: str
    predecessors: dict  # key -> (predecessor key, move token); seed maps to ("", "")
    partial: bool
    levels: int

    @property
    def size(self) -> int:
        return len(self.predecessors)

    def representative(self) -> str:
        return min(self.predecessors)

    def word_to(self, key: str) -> str:
        """Move word from the seed to a member, off the predecessor log."""
        tokens: list[str] = []
        while key != self.seed:
            pred, token = self.predecessors[key]
            tokens.append(token)
            key = pred
        return " ".join(reversed(tokens))


def orbit_bfs(seed: HurwitzSystem, moves: tuple[CompiledMove, ...],
              budget: int | None = None, threads: int = 1) -> OrbitResult:
    """Flood the orbit of seed under the move set.

    Level-synchronous: each level's frontier is split into contiguous
    slices handled by a worker pool, and the slices' discoveries are
    merged smallest-predecessor-first, so the predecessor log is a
    pure function of the seed and move set, not of scheduling.  With a
    budget, the flood stops after the last fully merged level and the
    result is marked partial.
    """
    seed_key = serialize(seed)
    predecessors: dict[str, tuple[str, str]] = {seed_key: ("", "")}
    frontier: list[tuple[str, HurwitzSystem]] = [(seed_key, seed)]
    levels = 0

    def expand(chunk):
        found = []
        for key, sys in chunk:
            for mv in moves:
                new = mv.apply(sys)
                new_key = serialize(new)
                if new_key not in predecessors:
                    found.append((new_key, new, key, mv.token))
        return found

    pool = ThreadPoolExecutor(max_workers=max(threads, 1)) if threads > 1 else None
    try:
        while frontier:
            if budget is not None and len(predecessors) >= budget:
                return OrbitResult(seed_key, predecessors, True, levels)
            frontier.sort(key=lambda item: item[0])
            if pool is None:
                results = [expand(frontier)]
            else:
                step = max(1, (len(frontier) + threads - 1) // threads)
                chunks = [frontier[k : k + step] for k in range(0, len(frontier), step)]
                results = list(pool.map(expand, chunks))
            best: dict[str, tuple[str, str, HurwitzSystem]] = {}
            for found in results:
                for new_key, new, pred, token in found:
                    prev = best.get(new_key)
                    if prev is None or (pred, token) < (prev[0], prev[1]):
                        best[new_key] = (pred, token, new)
            frontier = []
            for new_key in sorted(best):
                pred, token, new = best[new_key]
                predecessors[new_key] = (pred, token)
                frontier.append((new_key, new))
            levels += 1
    finally:
        if pool is not None:
            pool.shutdown()
    return OrbitResult(seed_key, predecessors, False, levels)


# ---------------------------------------------------------------------------
# predecessor logs on disk

_LOG_MAGIC = b"HWSPRED1"

# Record layout, little endian, repeated to end of file:
#   u32 key length, key bytes (UTF-8 system line)
#   u32 predecessor length, predecessor bytes (empty for the seed)
#   u16 token length, token bytes
# First record is always the seed.

def write_predecessor_log(path: str, result: OrbitResult) -> None:
    with open(path, "wb") as fh:
        fh.write(_LOG_MAGIC)
        order = [result.seed] + sorted(k for k in result.predecessors if k != result.seed)
        for key in order:
            pred, token = result.predecessors[key]
            kb, pb, tb = key.encode(), pred.encode(), token.encode()
            fh.write(struct.pack("<I", len(kb)))
            fh.write(kb)
            fh.write(struct.pack("<I", len(pb)))
            fh.write(pb)
            fh.write(struct.pack("<H", len(tb)))
            fh.write(tb)


def read_predecessor_log(path: str) -> OrbitResult:
    with open(path, "rb") as fh:
        if fh.read(len(_LOG_MAGIC)) != _LOG_MAGIC:
            raise ValueError("not a predecessor log: %s" % path)
        predecessors = {}
        seed = None
        while True:
            head = fh.read(4)
            if not head:
                break
            key = fh.read(struct.unpack("<I", head)[0]).decode()
            pred = fh.read(struct.unpack("<I", fh.read(4))[0]).decode()
            token = fh.read(struct.unpack("<H", fh.read(2))[0]).decode()
            predecessors[key] = (pred, token)
            if seed is None:
                seed = key
    return OrbitResult(seed or "", predecessors, False, -1)


# ---------------------------------------------------------------------------
# census

@dataclass(frozen=True)
class OrbitRecord:
    rep: str
    size: int
    full_monodromy: bool
    samples: tuple[str, ...]
    blocks: tuple[tuple[int, ...], ...]


@dataclass
class CensusResult:
    d: int
    h: int
    w: int
    selector: str
    filter_name: str
    orbits: list[OrbitRecord]
    total: int
    partial: bool

    def to_jsonl(self) -> str:
        lines = []
        params = {"d": self.d, "h": self.h, "w": self.w,
                  "moves": self.selector, "filter": self.filter_name}
        for rec in self.orbits:
            lines.append(json.dumps({
                "rep": rec.rep,
                "size": rec.size,
                "full_monodromy": rec.full_monodromy,
                "moves": catalog_hash(),
                "params": params,
                "samples": list(rec.samples),
                "blocks": [list(b) for b in rec.blocks],
            }, sort_keys=True))
        return "\n".join(lines) + "\n"


def census(d: int, h: int, w: int, selector: str = "full",
           filter: Callable[[HurwitzSystem], bool] | None = None,
           filter_name: str = "all", budget: int | None = None,
           threads: int = 1) -> CensusResult:
    """Partition every filtered system into move orbits by repeated
    floods from the least unvisited key.  The filter must be invariant
    under the moves (monodromy-based filters are: moves preserve the
    monodromy subgroup exactly), which is checked on the fly."""
    from .systems import branching_blocks, deserialize

    systems = {}
    for sys in enumerate_systems(d, h, w, filter):
        systems[serialize(sys)] = sys
    moves = compile_moves(d, h, w, selector)
    visited: set[str] = set()
    orbits: list[OrbitRecord] = []
    partial = False
    for key in sorted(systems):
        if key in visited:
            continue
        res = orbit_bfs(systems[key], moves,
                        budget=None if budget is None else budget - len(visited),
                        threads=threads)
        partial = partial or res.partial
        members = sorted(res.predecessors)
        for m in members:
            if m not in systems:
                raise AssertionError("orbit escaped the filter at %s" % m)
        visited.update(members)
        rep = members[0]
        orbits.append(OrbitRecord(
            rep, len(members), is_full_monodromy(systems[rep]),
            tuple(members[:3]),
            tuple(branching_blocks(systems[rep])),
        ))
        if budget is not None and len(visited) >= budget:
            partial = True
            break
    orbits.sort(key=lambda rec: rec.rep)
    return CensusResult(d, h, w, selector, filter_name, orbits, len(visited), partial)


# ---------------------------------------------------------------------------
# pathfinding

def _invert_word(tokens: list[str]) -> list[str]:
    out = []
    for token in reversed(tokens):
        out.append(token[:-1] if token.endswith("'") else token + "'")
    return out


def connect(source: HurwitzSystem, target: HurwitzSystem,
            selector: str = "full", budget: int | None = None) -> Certificate | None:
    """Bidirectional search for a move word source -> target.  Returns
    None only when an entire component was exhausted without meeting,
    which is a proof of disconnection.  Raises BudgetError when the
    state budget runs out first (inconclusive)."""
    if (source.d, source.h, source.w) != (target.d, target.h, target.w):
        raise ValueError("connect endpoints have different parameters")
    moves = compile_moves(source.d, source.h, source.w, selector)
    src_key, dst_key = serialize(source), serialize(target)
    if src_key == dst_key:
        return certificate(source, "", target)
    sides = (
        {src_key: ("", "")},
        {dst_key: ("", "")},
    )
    frontiers: list[list[tuple[str, HurwitzSystem]]] = [[(src_key, source)], [(dst_key, target)]]

    def path_from(side: dict, key: str) -> list[str]:
        tokens = []
        while True:
            pred, token = side[key]
            if not pred:
                return list(reversed(tokens))
            tokens.append(token)
            key = pred

    while frontiers[0] and frontiers[1]:
        pick = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        mine, other = sides[pick], sides[1 - pick]
        if budget is not None and len(sides[0]) + len(sides[1]) > budget:
            raise BudgetError("connect exceeded its %d-state budget" % budget)
        frontier = sorted(frontiers[pick], key=lambda item: item[0])
        new_frontier = []
        meets = []
        for key, sys in frontier:
            for mv in moves:
                new = mv.apply(sys)
                new_key = serialize(new)
                if new_key in mine:
                    continue
                mine[new_key] = (key, mv.token)
                new_frontier.append((new_key, new))
                if new_key in other:
                    meets.append(new_key)
        if meets:
            meet = min(meets)
            fwd = path_from(sides[0], meet)
            bwd = path_from(sides[1], meet)
            word = " ".join(fwd + _invert_word(bwd))
            return certificate(source, word, target)
        frontiers[pick] = new_frontier
    return None

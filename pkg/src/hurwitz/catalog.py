"""The frozen move schema catalog.

Elementary moves are stored as words over schema tokens in a data file
(``data/catalog.txt``) rather than as code: braid moves over the pair
x, y of adjacent puncture generators, handle point-pushes over the
tokens a, b (the pushed handle's loops), g (the last puncture) and K
(the commutator block of all earlier handles).  This module parses the
file, substitutes concrete generators per (h, w, position), and
certifies every instantiated endomorphism against the peripheral
contract before it is released.  The SHA-256 of the file is stamped
into reports so two runs can be compared move-for-move.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .words import (
    EndoMap,
    FreeContext,
    Word,
    commutator_word,
    concat,
    identity_endo,
    invert_word,
    validate_peripheral,
)

# (token, sign) pairs; sign is +1 or -1
TokenWord = tuple[tuple[str, int], ...]

BRAID_TOKENS = ("x", "y")
PUSH_TOKENS = ("a", "b", "g", "K")

_SECTIONS = ("braid", "braid^-1", "push_a", "push_a^-1", "push_b", "push_b^-1")
_ENTRIES = {
    "braid": ("x", "y"),
    "braid^-1": ("x", "y"),
    "push_a": ("g", "b"),
    "push_a^-1": ("g", "b"),
    "push_b": ("g", "a"),
    "push_b^-1": ("g", "a"),
}


class CatalogError(Exception):
    """Schema file missing, malformed, or failing certification."""


def _parse_token(text: str, alphabet: tuple[str, ...]) -> tuple[str, int]:
    sign = 1
    if text.endswith("^-1"):
        sign, text = -1, text[:-3]
    if text not in alphabet:
        raise CatalogError("unknown schema token %r" % text)
    return text, sign


def _parse_token_word(text: str, alphabet: tuple[str, ...]) -> TokenWord:
    text = text.strip()
    if not text or text == "1":
        return ()
    return tuple(_parse_token(piece, alphabet) for piece in text.split())


@dataclass(frozen=True)
class Schemas:
    """Parsed schema file: section -> entry letter -> token word."""

    sections: dict

    def entry(self, section: str, letter: str) -> TokenWord:
        return self.sections[section][letter]


def parse_schemas(text: str) -> Schemas:
    sections: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1]
            if name not in _SECTIONS:
                raise CatalogError("line %d: unknown section [%s]" % (lineno, name))
            if name in sections:
                raise CatalogError("line %d: duplicate section [%s]" % (lineno, name))
            current = name
            sections[name] = {}
            continue
        if current is None or ":" not in line:
            raise CatalogError("line %d: expected 'letter: word'" % lineno)
        letter, _, word = line.partition(":")
        letter = letter.strip()
        alphabet = BRAID_TOKENS if current.startswith("braid") else PUSH_TOKENS
        if letter not in _ENTRIES[current]:
            raise CatalogError("line %d: unexpected entry %r in [%s]" % (lineno, letter, current))
        if letter in sections[current]:
            raise CatalogError("line %d: duplicate entry %r" % (lineno, letter))
        sections[current][letter] = _parse_token_word(word, alphabet)
    for name in _SECTIONS:
        if name not in sections:
            raise CatalogError("missing section [%s]" % name)
        for letter in _ENTRIES[name]:
            if letter not in sections[name]:
                raise CatalogError("section [%s] is missing entry %r" % (name, letter))
    return Schemas(sections)


def catalog_bytes() -> bytes:
    return resources.files("hurwitz.data").joinpath("catalog.txt").read_bytes()


@lru_cache(maxsize=1)
def catalog_hash() -> str:
    return hashlib.sha256(catalog_bytes()).hexdigest()


@lru_cache(maxsize=1)
def get_schemas() -> Schemas:
    return parse_schemas(catalog_bytes().decode("utf-8"))


# ---------------------------------------------------------------------------
# instantiation

def _substitute(tokens: TokenWord, mapping: dict[str, Word]) -> Word:
    parts = []
    for name, sign in tokens:
        word = mapping[name]
        parts.append(word if sign > 0 else invert_word(word))
    return concat(*parts)


def handle_block_word(ctx: FreeContext, i: int) -> Word:
    """[a_1,b_1] ... [a_{i-1},b_{i-1}], the K token for handle i."""
    parts = [commutator_word((ctx.a(k),), (ctx.b(k),)) for k in range(1, i)]
    return concat(*parts)


def _endo_from_images(ctx: FreeContext, fwd: dict[int, Word], inv: dict[int, Word]) -> EndoMap:
    base = identity_endo(ctx)
    images = tuple(fwd.get(k, base.images[k - 1]) for k in range(1, ctx.rank + 1))
    inverse = tuple(inv.get(k, base.images[k - 1]) for k in range(1, ctx.rank + 1))
    return EndoMap(ctx, images, inverse)


def braid_endo(ctx: FreeContext, j: int, schemas: Schemas | None = None) -> EndoMap:
    """The braid move at punctures j, j+1 as a free group map."""
    if not 1 <= j <= ctx.w - 1:
        raise ValueError("braid position %d out of range 1..%d" % (j, ctx.w - 1))
    s = schemas or get_schemas()
    mapping = {"x": (ctx.g(j),), "y": (ctx.g(j + 1),)}
    fwd = {ctx.g(j): _substitute(s.entry("braid", "x"), mapping),
           ctx.g(j + 1): _substitute(s.entry("braid", "y"), mapping)}
    inv = {ctx.g(j): _substitute(s.entry("braid^-1", "x"), mapping),
           ctx.g(j + 1): _substitute(s.entry("braid^-1", "y"), mapping)}
    return _endo_from_images(ctx, fwd, inv)


def push_endo(ctx: FreeContext, i: int, side: str, schemas: Schemas | None = None) -> EndoMap:
    """The point-push of the last puncture around a loop of handle i.

    side "a" pushes along the a_i loop and rewrites b_i; side "b"
    pushes along b_i and rewrites a_i.  Only g_w and the rewritten
    handle generator move.
    """
    if not 1 <= i <= ctx.h:
        raise ValueError("handle index %d out of range 1..%d" % (i, ctx.h))
    if ctx.w < 1:
        raise ValueError("point-push needs at least one puncture")
    if side not in ("a", "b"):
        raise ValueError("side must be 'a' or 'b', got %r" % side)
    s = schemas or get_schemas()
    section = "push_" + side
    moved = ctx.b(i) if side == "a" else ctx.a(i)
    moved_name = "b" if side == "a" else "a"
    mapping = {"a": (ctx.a(i),), "b": (ctx.b(i),), "g": (ctx.g(ctx.w),),
               "K": handle_block_word(ctx, i)}
    fwd = {ctx.g(ctx.w): _substitute(s.entry(section, "g"), mapping),
           moved: _substitute(s.entry(section, moved_name), mapping)}
    inv = {ctx.g(ctx.w): _substitute(s.entry(section + "^-1", "g"), mapping),
           moved: _substitute(s.entry(section + "^-1", moved_name), mapping)}
    return _endo_from_images(ctx, fwd, inv)


# ---------------------------------------------------------------------------
# certified, cached instances

@lru_cache(maxsize=4096)
def certified_braid_endo(h: int, w: int, j: int) -> EndoMap:
    e = braid_endo(FreeContext(h, w), j)
    report = validate_peripheral(e)
    if not report.ok:
        raise CatalogError("braid schema failed certification at (h=%d, w=%d, j=%d): %s"
                           % (h, w, j, report.messages[0]))
    return e


@lru_cache(maxsize=4096)
def certified_push_endo(h: int, w: int, i: int, side: str) -> EndoMap:
    e = push_endo(FreeContext(h, w), i, side)
    report = validate_peripheral(e)
    if not report.ok:
        raise CatalogError("push schema failed certification at (h=%d, w=%d, i=%d, side=%s): %s"
                           % (h, w, i, side, report.messages[0]))
    return e

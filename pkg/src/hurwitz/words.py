"""Free group words for the punctured-surface group.

The fundamental group of a genus-h surface with w punctures is free on
2h + w letters once one boundary relation is chosen.  Generators, in
order: handle loops a_1, b_1, ..., a_h, b_h, then puncture loops
g_1, ..., g_w.  The surface relator is

    R = g_1 ... g_w [a_1,b_1] ... [a_h,b_h]

with [x,y] = x y x^-1 y^-1, all products read left to right.

A Letter is a nonzero int: +k is generator number k (1-based in the
order above), -k its inverse.  A Word is a tuple of letters, kept freely
reduced by the constructors here.  Endomorphisms are stored as the tuple
of generator images together with the images of a stored inverse map;
``validate_peripheral`` certifies that an endomorphism is a relator- and
puncture-structure-preserving automorphism, which is the soundness gate
every elementary move must pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Word = tuple[int, ...]


@dataclass(frozen=True)
class FreeContext:
    """Generator bookkeeping for fixed (h, w)."""

    h: int
    w: int

    def __post_init__(self):
        if self.h < 0 or self.w < 0:
            raise ValueError("h and w must be nonnegative")

    @property
    def rank(self) -> int:
        return 2 * self.h + self.w

    def a(self, i: int) -> int:
        assert 1 <= i <= self.h
        return 2 * i - 1

    def b(self, i: int) -> int:
        assert 1 <= i <= self.h
        return 2 * i

    def g(self, j: int) -> int:
        assert 1 <= j <= self.w
        return 2 * self.h + j

    def name(self, letter: int) -> str:
        k = abs(letter)
        assert 1 <= k <= self.rank
        if k > 2 * self.h:
            base = "g%d" % (k - 2 * self.h)
        elif k % 2:
            base = "a%d" % ((k + 1) // 2)
        else:
            base = "b%d" % (k // 2)
        return base + ("^-1" if letter < 0 else "")

    def letter(self, name: str) -> int:
        sign = 1
        if name.endswith("^-1"):
            sign, name = -1, name[:-3]
        kind, idx = name[0], name[1:]
        if kind not in "abg" or not idx.isdigit():
            raise ValueError("bad letter name: %r" % name)
        i = int(idx)
        if kind == "a":
            return sign * self.a(i)
        if kind == "b":
            return sign * self.b(i)
        return sign * self.g(i)


def reduce_word(letters: Iterable[int]) -> Word:
    """Freely reduce: adjacent x x^-1 pairs cancel.

    >>> reduce_word([1, 2, -2, -1, 3])
    (3,)
    """
    out: list[int] = []
    for x in letters:
        assert x != 0
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert_word(word: Word) -> Word:
    return tuple(-x for x in reversed(word))


def concat(*parts: Iterable[int]) -> Word:
    letters: list[int] = []
    for part in parts:
        letters.extend(part)
    return reduce_word(letters)


def conjugate_word(word: Word, by: Word) -> Word:
    """by^-1 word by, reduced."""
    return concat(invert_word(by), word, by)


def commutator_word(x: Word, y: Word) -> Word:
    return concat(x, y, invert_word(x), invert_word(y))


def cyclic_reduce(word: Word) -> Word:
    w = reduce_word(word)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def conjugate_parts(word: Word) -> tuple[Word, int] | None:
    """If word == V x V^-1 (reduced) for a single letter x, return (V, x).

    >>> conjugate_parts((1, 2, 3, -2, -1))
    ((1, 2), 3)
    """
    if len(word) % 2 == 0:
        return None
    m = len(word) // 2
    for i in range(m):
        if word[i] != -word[-1 - i]:
            return None
    return word[:m], word[m]


def is_conjugate(u: Word, v: Word) -> bool:
    """Conjugacy in the free group: equal cyclic reductions up to rotation.

    >>> is_conjugate((1, 2), (2, 1))
    True
    >>> is_conjugate((1,), (2,))
    False
    """
    cu, cv = cyclic_reduce(u), cyclic_reduce(v)
    if len(cu) != len(cv):
        return False
    if not cu:
        return True
    return any(cv[k:] + cv[:k] == cu for k in range(len(cv)))


def parse_word(text: str, ctx: FreeContext) -> Word:
    """Parse "a1 b1^-1 g3" style text."""
    return reduce_word(ctx.letter(tok) for tok in text.split())


def format_word(word: Word, ctx: FreeContext) -> str:
    return " ".join(ctx.name(x) for x in word) if word else "1"


def relator(ctx: FreeContext) -> Word:
    parts: list[Word] = [tuple(ctx.g(j) for j in range(1, ctx.w + 1))]
    for i in range(1, ctx.h + 1):
        parts.append(commutator_word((ctx.a(i),), (ctx.b(i),)))
    return concat(*parts)


@dataclass(frozen=True)
class EndoMap:
    """Endomorphism of the free group, given by generator images.

    ``images[k-1]`` is the image word of generator k.  ``inverse_images``
    are the images under the stored inverse map; peripheral validation
    refuses to certify a map without one.
    """

    ctx: FreeContext
    images: tuple[Word, ...]
    inverse_images: tuple[Word, ...] | None = None

    def __post_init__(self):
        if len(self.images) != self.ctx.rank:
            raise ValueError("need %d generator images, got %d" % (self.ctx.rank, len(self.images)))

    def image(self, letter: int) -> Word:
        word = self.images[abs(letter) - 1]
        return word if letter > 0 else invert_word(word)

    def apply(self, word: Word) -> Word:
        return concat(*(self.image(x) for x in word))

    def inverse(self) -> "EndoMap":
        if self.inverse_images is None:
            raise ValueError("endomorphism carries no stored inverse")
        return EndoMap(self.ctx, self.inverse_images, self.images)


def identity_endo(ctx: FreeContext) -> EndoMap:
    images = tuple((k,) for k in range(1, ctx.rank + 1))
    return EndoMap(ctx, images, images)


def compose_endos(outer: EndoMap, inner: EndoMap) -> EndoMap:
    """The map word -> outer(inner(word)).  Inverse images compose the
    other way around when both factors carry them."""
    assert outer.ctx == inner.ctx
    images = tuple(outer.apply(w) for w in inner.images)
    inv = None
    if outer.inverse_images is not None and inner.inverse_images is not None:
        inner_inv, outer_inv = inner.inverse(), outer.inverse()
        inv = tuple(inner_inv.apply(w) for w in outer_inv.images)
    return EndoMap(outer.ctx, images, inv)


@dataclass(frozen=True)
class PeripheralReport:
    ok: bool
    messages: tuple[str, ...]
    puncture_map: tuple[int, ...] | None = None


def validate_peripheral(e: EndoMap) -> PeripheralReport:
    """Certify that e is an automorphism preserving the peripheral
    structure: (i) the stored inverse really inverts it on every
    generator, (ii) each puncture generator maps to a conjugate of a
    puncture generator, the assignment being a bijection, (iii) the
    surface relator maps to a conjugate of itself, orientation kept
    (a map sending R to a conjugate of R^-1 is rejected).
    """
    ctx = e.ctx
    if e.inverse_images is None:
        raise ValueError("endomorphism carries no stored inverse")
    f = e.inverse()
    msgs: list[str] = []
    for k in range(1, ctx.rank + 1):
        if e.apply(f.image(k)) != (k,):
            msgs.append("e(e^-1(%s)) != %s" % (ctx.name(k), ctx.name(k)))
            break
        if f.apply(e.image(k)) != (k,):
            msgs.append("e^-1(e(%s)) != %s" % (ctx.name(k), ctx.name(k)))
            break
    pi: list[int] = []
    if not msgs:
        for j in range(1, ctx.w + 1):
            core = cyclic_reduce(e.image(ctx.g(j)))
            if len(core) != 1 or core[0] <= 2 * ctx.h:
                msgs.append("image of g%d is not a conjugate of a puncture generator" % j)
                break
            pi.append(core[0] - 2 * ctx.h)
        if not msgs and sorted(pi) != list(range(1, ctx.w + 1)):
            msgs.append("puncture assignment %r is not a bijection" % (pi,))
    if not msgs:
        r = relator(ctx)
        if not is_conjugate(e.apply(r), r):
            if is_conjugate(e.apply(r), invert_word(r)):
                msgs.append("relator maps to a conjugate of its inverse (orientation reversed)")
            else:
                msgs.append("relator image is not conjugate to the relator")
    if msgs:
        return PeripheralReport(False, tuple(msgs), None)
    return PeripheralReport(True, (), tuple(pi))

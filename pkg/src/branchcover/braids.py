"""Exact arithmetic in braid groups B_d.

A BraidWord is a word in the standard generators: ``letters`` is a tuple of
signed integers where ``i`` stands for the i-th generator and ``-i`` for its
inverse (1 <= i <= d-1).  Words multiply by concatenation, read LEFT TO RIGHT
like everything else in this package.

Equality of group elements is decided through the action on the free group
F_d: the i-th generator maps x_i -> x_i x_{i+1} x_i^-1 and x_{i+1} -> x_i,
fixing the other generators.  The tuple of images of (x_1, ..., x_d) under a
word, kept freely reduced, is a complete invariant of the braid element (the
action is faithful), so two words are equal in B_d iff their image tuples
coincide.  Free group words are tuples of nonzero ints with the same sign
convention.
"""

from __future__ import annotations

import dataclasses
import functools
import re
from typing import Iterable, Sequence

from .permutations import MAX_DEGREE, ParseError, Permutation, product

Letter = int


def _check_braid_degree(d: int) -> None:
    if not isinstance(d, int) or d < 2:
        raise ValueError(f"braid degree must be an integer >= 2, got {d!r}")
    if d > MAX_DEGREE:
        raise ValueError(f"degree {d} exceeds the configured cap {MAX_DEGREE}")


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    """Cancel adjacent inverse pairs.

    >>> free_reduce((1, 2, -2, -1, 3))
    (3,)
    """
    stack: list[int] = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


@dataclasses.dataclass(frozen=True)
class FreeWord:
    """A freely reduced word in the free group of the given rank."""

    rank: int
    letters: tuple[int, ...]

    def __post_init__(self):
        for x in self.letters:
            if x == 0 or abs(x) > self.rank:
                raise ValueError(f"letter {x} out of range for rank {self.rank}")
        if free_reduce(self.letters) != self.letters:
            raise ValueError(f"word {self.letters} is not freely reduced")

    @staticmethod
    def make(rank: int, letters: Iterable[int]) -> "FreeWord":
        return FreeWord(rank, free_reduce(letters))

    def inverse(self) -> "FreeWord":
        return FreeWord(self.rank, tuple(-x for x in reversed(self.letters)))

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        if not isinstance(other, FreeWord):
            return NotImplemented
        if self.rank != other.rank:
            raise ValueError("rank mismatch")
        return FreeWord.make(self.rank, self.letters + other.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"x{x}" if x > 0 else f"x{-x}^-1" for x in self.letters)


@dataclasses.dataclass(frozen=True)
class BraidWord:
    """A word in the generators of B_d; value semantics up to free spelling."""

    degree: int
    letters: tuple[Letter, ...]

    def __post_init__(self):
        _check_braid_degree(self.degree)
        for x in self.letters:
            if x == 0 or abs(x) > self.degree - 1:
                raise ValueError(
                    f"generator index {x} out of range for degree {self.degree}"
                )

    @staticmethod
    def identity(d: int) -> "BraidWord":
        return BraidWord(d, ())

    @staticmethod
    def generator(d: int, i: int, sign: int = 1) -> "BraidWord":
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return BraidWord(d, (i * sign,))

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if not isinstance(other, BraidWord):
            return NotImplemented
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")
        return BraidWord(self.degree, free_reduce(self.letters + other.letters))

    def inverse(self) -> "BraidWord":
        return BraidWord(self.degree, tuple(-x for x in reversed(self.letters)))

    def __pow__(self, g: "BraidWord") -> "BraidWord":
        """Conjugate: self ** g == g^-1 self g."""
        if not isinstance(g, BraidWord):
            return NotImplemented
        return g.inverse() * self * g

    def is_identity(self) -> bool:
        return canonical_key(self) == tuple((k,) for k in range(1, self.degree + 1))

    def __str__(self) -> str:
        return word_string(self)

    def __repr__(self) -> str:
        return f"BraidWord({self.degree}, {word_string(self)!r})"


def _apply_letter(images: tuple[tuple[int, ...], ...], letter: int) -> tuple[tuple[int, ...], ...]:
    """Substitute one generator's elementary automorphism into each image word."""
    i = abs(letter)
    if letter > 0:
        # x_i -> x_i x_{i+1} x_i^-1,  x_{i+1} -> x_i
        table = {i: (i, i + 1, -i), -i: (i, -(i + 1), -i), i + 1: (i,), -(i + 1): (-i,)}
    else:
        # inverse: x_i -> x_{i+1},  x_{i+1} -> x_{i+1}^-1 x_i x_{i+1}
        table = {i: (i + 1,), -i: (-(i + 1),), i + 1: (-(i + 1), i, i + 1), -(i + 1): (-(i + 1), -i, i + 1)}
    out = []
    for word in images:
        stack: list[int] = []
        for x in word:
            for y in table.get(x, (x,)):
                if stack and stack[-1] == -y:
                    stack.pop()
                else:
                    stack.append(y)
        out.append(tuple(stack))
    return tuple(out)


@functools.lru_cache(maxsize=65536)
def _artin_images(degree: int, letters: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    images = tuple((k,) for k in range(1, degree + 1))
    for letter in letters:
        images = _apply_letter(images, letter)
    return images


def canonical(w: BraidWord) -> tuple[FreeWord, ...]:
    """Images of the free generators under w; a complete invariant of the element."""
    return tuple(FreeWord(w.degree, word) for word in _artin_images(w.degree, w.letters))


def canonical_key(w: BraidWord) -> tuple[tuple[int, ...], ...]:
    """Hashable form of ``canonical`` for dictionaries and state sets."""
    return _artin_images(w.degree, w.letters)


def braids_equal(u: BraidWord, v: BraidWord) -> bool:
    """True iff u and v represent the same element of B_d."""
    if u.degree != v.degree:
        raise ValueError(f"degree mismatch: {u.degree} vs {v.degree}")
    return canonical_key(u) == canonical_key(v)


def project(w: BraidWord) -> Permutation:
    """Natural projection B_d -> S_d; exponent signs are forgotten."""
    return product(
        (Permutation.adjacent(w.degree, abs(x)) for x in w.letters), degree=w.degree
    )


def exponent_sum(w: BraidWord) -> int:
    """Abelianization B_d -> Z; invariant under the braid relations."""
    return sum(1 if x > 0 else -1 for x in w.letters)


# -- text format ---------------------------------------------------------
#
# Words are whitespace-separated tokens "s<i>" or "s<i>^-1", e.g.
# "s1 s2^-1 s3"; the empty string is the identity.

_BRAID_TOKEN = re.compile(r"s(\d+)(\^(-?1))?$")


def word_string(w: BraidWord) -> str:
    return " ".join(f"s{abs(x)}" if x > 0 else f"s{abs(x)}^-1" for x in w.letters)


def parse_braid(text: str, degree: int) -> BraidWord:
    """Parse "s1 s2^-1" tokens; errors carry the character position.

    >>> parse_braid("s1 s2^-1", 3).letters
    (1, -2)
    """
    _check_braid_degree(degree)
    letters: list[int] = []
    pos = 0
    for raw in text.split():
        at = text.index(raw, pos)
        pos = at + len(raw)
        m = _BRAID_TOKEN.match(raw)
        if m is None:
            raise ParseError(f"bad braid token {raw!r}", at)
        idx = int(m.group(1))
        if not (1 <= idx <= degree - 1):
            raise ParseError(
                f"generator index {idx} out of range 1..{degree - 1}", at
            )
        sign = -1 if m.group(3) == "-1" else 1
        letters.append(idx * sign)
    return BraidWord(degree, free_reduce(letters))


def braid_product(words: Sequence[BraidWord], degree: int | None = None) -> BraidWord:
    acc: BraidWord | None = None
    for w in words:
        acc = w if acc is None else acc * w
    if acc is None:
        if degree is None:
            raise ValueError("empty product needs an explicit degree")
        return BraidWord.identity(degree)
    return acc

"""Alphabets, words over signed generators, presentations, and normal forms.

A letter is a nonzero int whose absolute value is the generator index
(1-based) and whose sign is the exponent sign.  A word is an immutable
sequence of letters.  Costs are nonnegative ints, with ``INF`` absorbing
addition, so ``min``/``+`` work uniformly on finite and infinite values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

INF = float("inf")
Cost = int | float

ZERO = "zero"
EXACTLY = "exactly"
MULTIPLES = "multiples"


@dataclass(frozen=True)
class ExponentSet:
    """Admissible boundary-length set of one generator's relator powers."""

    kind: str
    n: int = 0

    def __post_init__(self) -> None:
        if self.kind not in (ZERO, EXACTLY, MULTIPLES):
            raise ValueError(f"unknown exponent set kind {self.kind!r}")
        if self.kind != ZERO and self.n < 1:
            raise ValueError("n must be >= 1 unless kind is zero")

    def contains(self, k: int) -> bool:
        if k <= 0:
            return False
        if self.kind == ZERO:
            return False
        if self.kind == EXACTLY:
            return k == self.n
        return k % self.n == 0

    def members_upto(self, bound: int) -> list[int]:
        if self.kind == ZERO:
            return []
        if self.kind == EXACTLY:
            return [self.n] if self.n <= bound else []
        return list(range(self.n, bound + 1, self.n))


class Word(tuple):
    """A word over the alphabet of signed generators."""

    __slots__ = ()

    def __new__(cls, letters: Iterable[int] = ()) -> "Word":
        letters = tuple(letters)
        if any(not isinstance(x, int) or x == 0 for x in letters):
            raise ValueError("letters must be nonzero ints")
        return super().__new__(cls, letters)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"

    def inverse(self) -> "Word":
        return Word(-x for x in reversed(self))

    def concat(self, other: Sequence[int]) -> "Word":
        return Word(tuple(self) + tuple(other))

    def count_gen(self, g: int) -> int:
        """Number of occurrences of generator ``g`` with either sign."""
        return sum(1 for x in self if abs(x) == g)

    def complementary_count(self, g: int) -> int:
        """Number of letters over generators other than ``g``."""
        return len(self) - self.count_gen(g)

    def cyclic_shift(self, k: int) -> "Word":
        if not self:
            return self
        k %= len(self)
        return Word(tuple(self[k:]) + tuple(self[:k]))

    def max_generator(self) -> int:
        return max((abs(x) for x in self), default=0)


@dataclass(frozen=True)
class CyclicProducts:
    """Free product of cyclic groups: one exponent set per generator."""

    sets: tuple[ExponentSet, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.names:
            object.__setattr__(self, "names", default_names(len(self.sets)))
        if len(self.names) != len(self.sets):
            raise ValueError("one name per exponent set required")

    @property
    def m(self) -> int:
        return len(self.sets)

    def exponent_set(self, g: int) -> ExponentSet:
        return self.sets[g - 1]


@dataclass(frozen=True)
class BaumslagSolitar:
    """One-relator presentation a2 a1^n1 a2^-1 = a1^n2 on m >= 2 generators."""

    n1: int
    n2: int
    m: int = 2
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.n1 == 0 or self.n2 == 0:
            raise ValueError("n1 and n2 must be nonzero")
        if self.m < 2:
            raise ValueError("at least two generators required")
        if not self.names:
            object.__setattr__(
                self, "names", tuple(f"a{i}" for i in range(1, self.m + 1))
            )
        if len(self.names) != self.m:
            raise ValueError("one name per generator required")

    def relator(self) -> Word:
        up = [2] + [1] * abs(self.n1) if self.n1 > 0 else [2] + [-1] * abs(self.n1)
        down = [-1] * self.n2 if self.n2 > 0 else [1] * abs(self.n2)
        return Word(up + [-2] + down)


Presentation = CyclicProducts | BaumslagSolitar


def default_names(m: int) -> tuple[str, ...]:
    if m <= 26:
        return tuple(chr(ord("a") + i) for i in range(m))
    return tuple(f"a{i}" for i in range(1, m + 1))


def free_reduce(w: Word) -> Word:
    """The unique reduced word freely equal to ``w``."""
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return Word(out)


def subword(w: Word, i: int, j: int) -> Word:
    """W(i, j): the length-``j`` subword starting at 1-based position ``i``."""
    if not (1 <= i <= max(len(w), 1)) or j < 0 or i + j - 1 > len(w):
        raise IndexError(f"window (i={i}, j={j}) out of range for |w|={len(w)}")
    return Word(w[i - 1 : i - 1 + j])


def is_trivial(w: Word, p: Presentation) -> bool:
    """Whether ``w`` represents the identity of the group presented by ``p``."""
    if isinstance(p, CyclicProducts):
        return not _cyclic_normal_form(w, p)
    from . import dpbs

    lam = dpbs.lambda_mu(w, p).lam
    return lam == 0


def _cyclic_normal_form(w: Word, p: CyclicProducts) -> list[tuple[int, int]]:
    """Stack of (generator, exponent) pairs after syllable reduction."""
    stack: list[tuple[int, int]] = []
    for x in w:
        g, d = abs(x), (1 if x > 0 else -1)
        if g > p.m:
            raise ValueError(f"letter {x} outside alphabet of size {p.m}")
        if stack and stack[-1][0] == g:
            e = stack[-1][1] + d
            es = p.exponent_set(g)
            if es.kind != ZERO:
                e %= es.n
            if e == 0:
                stack.pop()
            else:
                stack[-1] = (g, e)
        else:
            e = d
            es = p.exponent_set(g)
            if es.kind != ZERO:
                e %= es.n
            if e != 0:
                stack.append((g, e))
    return stack


_TOKEN = re.compile(r"^([A-Za-z][A-Za-z0-9_]*?)(?:\^(-?\d+))?$")


def parse_word(text: str, names: Sequence[str] = ()) -> Word:
    """Parse word text: lowercase = positive, uppercase = inverse, ^k powers."""
    names = tuple(names) or default_names(26)
    letters: list[int] = []
    for token in text.split():
        m = _TOKEN.match(token)
        if m and _name_index(m.group(1), names) is not None:
            g, sign = _name_index(m.group(1), names)  # type: ignore[misc]
            k = 1 if m.group(2) is None else int(m.group(2))
            letters.extend([sign * g * (1 if k > 0 else -1)] * abs(k))
        else:
            for ch in token:
                found = _name_index(ch, names)
                if found is None:
                    raise ValueError(f"unknown generator {ch!r} in {token!r}")
                g, sign = found
                letters.append(sign * g)
    return Word(letters)


def _name_index(name: str, names: Sequence[str]) -> tuple[int, int] | None:
    if name in names:
        return names.index(name) + 1, 1
    lowered = name.lower()
    if name != lowered and lowered in names:
        return names.index(lowered) + 1, -1
    return None


def format_word(w: Word, names: Sequence[str] = ()) -> str:
    """Inverse of parse_word; single-char names render case-flipped and packed."""
    names = tuple(names) or default_names(26)
    if not w:
        return ""
    packed = all(len(names[abs(x) - 1]) == 1 for x in w)
    parts = []
    for x in w:
        name = names[abs(x) - 1]
        if packed:
            parts.append(name if x > 0 else name.upper())
        else:
            parts.append(name if x > 0 else f"{name}^-1")
    return "".join(parts) if packed else " ".join(parts)


def word_letters(w: Word) -> Iterator[int]:
    return iter(w)

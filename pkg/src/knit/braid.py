"""Words in the Artin braid group B_n and their underlying permutations.

A braid word is a finite sequence of generators s1 .. s(n-1) and their
inverses.  Generators are written in the text form ``s3^-1 s2 s1^3``: each
token is ``s`` followed by a 1-based generator index and an optional nonzero
integer power.  Powers are expanded into single letters at parse time, so a
word of length L always stores L letters of exponent +-1.

The leftmost letter acts first.  Mapping each letter si to the adjacent
transposition (i, i+1) and composing in word order yields the underlying
permutation; its cycles are the components of the trace closure.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass

from .errors import DomainError, ParseError

__all__ = [
    "BraidWord",
    "Permutation",
    "parse_braid",
    "random_braid",
]

_TOKEN = re.compile(r"s(\d+)(?:\^(-?\d+))?")


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1..n}, stored as the tuple of images (1-based).

    Composition follows word order: ``a.then(b)`` applies a first, then b.
    """

    targets: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.targets)
        if sorted(self.targets) != list(range(1, n + 1)):
            raise DomainError(f"not a permutation of 1..{n}: {self.targets}")

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(1, n + 1)))

    @staticmethod
    def transposition(n: int, i: int) -> "Permutation":
        """The adjacent transposition (i, i+1) in S_n."""
        t = list(range(1, n + 1))
        t[i - 1], t[i] = t[i], t[i - 1]
        return Permutation(tuple(t))

    @property
    def n(self) -> int:
        return len(self.targets)

    def __call__(self, i: int) -> int:
        return self.targets[i - 1]

    def then(self, other: "Permutation") -> "Permutation":
        """Composite acting as self first, then other."""
        return Permutation(tuple(other.targets[t - 1] for t in self.targets))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.targets)
        for i, t in enumerate(self.targets):
            inv[t - 1] = i + 1
        return Permutation(tuple(inv))

    def inversions(self) -> int:
        return sum(
            1
            for i, j in itertools.combinations(range(self.n), 2)
            if self.targets[i] > self.targets[j]
        )

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            nxt = self(start)
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self(nxt)
            out.append(tuple(cyc))
        return out

    def is_identity(self) -> bool:
        return all(t == i + 1 for i, t in enumerate(self.targets))


@dataclass(frozen=True)
class BraidWord:
    """A word in B_n: ``index`` strands and a letter sequence.

    Each letter is a pair (generator, sign) with 1 <= generator < index and
    sign in {+1, -1}.
    """

    index: int
    letters: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.index < 1:
            raise DomainError(f"braid index must be >= 1, got {self.index}")
        for gen, sign in self.letters:
            if not 1 <= gen < self.index:
                raise DomainError(
                    f"generator s{gen} out of range for braid index {self.index}"
                )
            if sign not in (1, -1):
                raise DomainError(f"letter sign must be +-1, got {sign}")

    @staticmethod
    def identity(n: int) -> "BraidWord":
        return BraidWord(n, ())

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.index != other.index:
            raise DomainError(
                f"cannot concatenate words in B_{self.index} and B_{other.index}"
            )
        return BraidWord(self.index, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(
            self.index, tuple((g, -s) for g, s in reversed(self.letters))
        )

    def free_reduce(self) -> "BraidWord":
        """Cancel adjacent si si^-1 pairs until none remain."""
        stack: list[tuple[int, int]] = []
        for letter in self.letters:
            if stack and stack[-1][0] == letter[0] and stack[-1][1] == -letter[1]:
                stack.pop()
            else:
                stack.append(letter)
        return BraidWord(self.index, tuple(stack))

    def exponent_sum(self) -> int:
        """Sum of letter signs; the writhe of the trace closure."""
        return sum(s for _, s in self.letters)

    def permutation(self) -> Permutation:
        p = Permutation.identity(self.index)
        for gen, _ in self.letters:
            p = p.then(Permutation.transposition(self.index, gen))
        return p

    def conjugate_by(self, a: "BraidWord") -> "BraidWord":
        """Markov move of the first kind: a * self * a^-1."""
        return a * self * a.inverse()

    def stabilize(self, sign: int = 1) -> "BraidWord":
        """Markov move of the second kind: include into B_(n+1), append sn^+-1."""
        if sign not in (1, -1):
            raise DomainError(f"stabilization sign must be +-1, got {sign}")
        n = self.index
        return BraidWord(n + 1, self.letters + ((n, sign),))

    def __str__(self) -> str:
        # the empty word prints as the empty string, matching the grammar
        if not self.letters:
            return ""
        parts = []
        for gen, sign in self.letters:
            parts.append(f"s{gen}" if sign > 0 else f"s{gen}^-1")
        return " ".join(parts)


def parse_braid(text: str, index: int) -> BraidWord:
    """Parse generator tokens like ``s3^-1 s2 s1^3`` into a BraidWord.

    Tokens are separated by whitespace; powers expand into repeated letters.
    Raises ParseError (with a position) on malformed text and on generator
    indices outside 1..index-1.
    """
    if index < 1:
        raise DomainError(f"braid index must be >= 1, got {index}")
    letters: list[tuple[int, int]] = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"expected generator token, found {text[pos]!r}", pos)
        end = m.end()
        if end < n and not text[end].isspace():
            raise ParseError(f"malformed token {text[pos:end + 1]!r}", pos)
        gen = int(m.group(1))
        if gen < 1:
            raise ParseError(f"generator index must be >= 1, got s{gen}", pos)
        if gen >= index:
            raise ParseError(
                f"generator s{gen} out of range for braid index {index}", pos
            )
        power = int(m.group(2)) if m.group(2) is not None else 1
        if power == 0:
            raise ParseError("zero power is not a letter", pos)
        sign = 1 if power > 0 else -1
        letters.extend([(gen, sign)] * abs(power))
        pos = end
    return BraidWord(index, tuple(letters))


def random_braid(index: int, length: int, seed: int) -> BraidWord:
    """A uniformly random word with `length` letters, reproducible per seed."""
    if index < 2 and length > 0:
        raise DomainError("B_1 has no generators")
    rng = random.Random(seed)
    letters = tuple(
        (rng.randrange(1, index), rng.choice((1, -1))) for _ in range(length)
    )
    return BraidWord(index, letters)

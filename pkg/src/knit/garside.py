"""Garside left-canonical normal form; solves the word problem in B_n.

Every braid has a unique expression Delta^p x1 x2 .. xk where Delta is the
positive half twist, each xi is a simple element (the positive lift of a
permutation) different from the identity and from Delta, and each adjacent
pair is left-weighted: every generator that can start x(i+1) must be able
to end xi.  Two words represent the same braid element exactly when these
data coincide, so equality testing reduces to computing the form.

Simple elements are represented by their permutations.  For a permutation
braid x, a generator si can start x iff x(i) > x(i+1), and can end x iff
i appears after i+1 in the image list.
"""

from __future__ import annotations

from dataclasses import dataclass

from .braid import BraidWord, Permutation
from .errors import DomainError

__all__ = ["NormalForm", "normal_form", "words_equal", "is_trivial"]


def _half_twist(n: int) -> Permutation:
    """The permutation of Delta_n: i -> n + 1 - i."""
    return Permutation(tuple(range(n, 0, -1)))


def _tau(p: Permutation) -> Permutation:
    """Conjugation by Delta; an involution on simple elements."""
    n = p.n
    return Permutation(tuple(n + 1 - p(n + 1 - i) for i in range(1, n + 1)))


def _starting_set(p: Permutation) -> set[int]:
    return {i for i in range(1, p.n) if p(i) > p(i + 1)}


def _finishing_set(p: Permutation) -> set[int]:
    inv = p.inverse()
    return {i for i in range(1, p.n) if inv(i) > inv(i + 1)}


def _append_gen(p: Permutation, i: int) -> Permutation:
    """The simple element p followed by si (swap the values i, i+1)."""
    return p.then(Permutation.transposition(p.n, i))


def _strip_gen(p: Permutation, i: int) -> Permutation:
    """Remove a leading si from p (swap the entries at positions i, i+1)."""
    t = list(p.targets)
    t[i - 1], t[i] = t[i], t[i - 1]
    return Permutation(tuple(t))


def _left_weight_pair(x: Permutation, y: Permutation) -> tuple[Permutation, Permutation]:
    """Slide leading generators of y into x until the pair is left-weighted."""
    while True:
        movable = _starting_set(y) - _finishing_set(x)
        if not movable:
            return x, y
        i = min(movable)
        x = _append_gen(x, i)
        y = _strip_gen(y, i)


@dataclass(frozen=True)
class NormalForm:
    """Left-canonical data (power of Delta, then left-weighted simple factors) of a braid."""

    index: int
    infimum: int
    factors: tuple[Permutation, ...]

    def canonical_length(self) -> int:
        return len(self.factors)

    def to_word(self) -> BraidWord:
        """Some braid word representing this element (used for round trips)."""
        n = self.index
        letters: list[tuple[int, int]] = []
        delta_word = _positive_lift_word(_half_twist(n))
        if self.infimum >= 0:
            letters.extend([(g, 1) for g in delta_word] * self.infimum)
        else:
            inv = [(g, -1) for g in reversed(delta_word)]
            letters.extend(inv * (-self.infimum))
        for f in self.factors:
            letters.extend((g, 1) for g in _positive_lift_word(f))
        return BraidWord(n, tuple(letters))

    def __str__(self) -> str:
        fs = " . ".join(
            "".join(f"s{g}" for g in _positive_lift_word(f)) for f in self.factors
        )
        return f"D^{self.infimum}" + (f" . {fs}" if fs else "")


def _positive_lift_word(p: Permutation) -> list[int]:
    """A reduced word (generator indices) for the permutation braid of p."""
    word: list[int] = []
    while not p.is_identity():
        s = _starting_set(p)
        i = min(s)
        word.append(i)
        p = _strip_gen(p, i)
    return word


def normal_form(w: BraidWord) -> NormalForm:
    """Compute the left-canonical form of a braid word."""
    n = w.index
    if n == 1:
        if w.letters:
            raise DomainError("B_1 has no generators")
        return NormalForm(1, 0, ())
    delta = _half_twist(n)

    # Each positive letter lifts to its transposition; each negative letter
    # si^-1 equals Delta^-1 times the simple element with permutation w0*si.
    powers: list[int] = []
    factors: list[Permutation] = []
    for gen, sign in w.letters:
        t = Permutation.transposition(n, gen)
        if sign > 0:
            powers.append(0)
            factors.append(t)
        else:
            powers.append(-1)
            factors.append(delta.then(t))

    # Push all Delta powers to the front; tau has order two.
    total = 0
    for i in range(len(factors) - 1, -1, -1):
        if total % 2:
            factors[i] = _tau(factors[i])
        total += powers[i]

    # Left-weighting sweeps until stable.
    changed = True
    while changed:
        changed = False
        for i in range(len(factors) - 1):
            x, y = factors[i], factors[i + 1]
            x2, y2 = _left_weight_pair(x, y)
            if x2.targets != x.targets:
                factors[i], factors[i + 1] = x2, y2
                changed = True

    factors = [f for f in factors if not f.is_identity()]
    while factors and factors[0].targets == delta.targets:
        factors.pop(0)
        total += 1
    return NormalForm(n, total, tuple(factors))


def words_equal(a: BraidWord, b: BraidWord) -> bool:
    """Whether two words represent the same element of B_n."""
    if a.index != b.index:
        raise DomainError(
            f"cannot compare words in B_{a.index} and B_{b.index}"
        )
    return normal_form(a) == normal_form(b)


def is_trivial(w: BraidWord) -> bool:
    nf = normal_form(w)
    return nf.infimum == 0 and not nf.factors

"""Laurent polynomials with integer coefficients on the quarter-exponent lattice.

Exponents are rationals with fixed denominator 4, stored as integer
numerators, so t^(1/2) is the monomial with numerator 2.  Coefficients are
arbitrary-precision ints.  This is exactly what bracket/Jones computations
need: the bracket lives in integer powers of A, the Jones polynomial of a
link in integer or half-integer powers of t, and the substitution
t = A^-4 (exponent scaling by -1/4) stays on the lattice.

Evaluation at a root of unity sends the formal variable to
q = exp(2*pi*i/r) with the principal fractional power
q^(k/4) = exp(2*pi*i*k/(4*r)).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, ParseError

__all__ = ["LaurentPoly", "evaluate_at_root"]

EXPONENT_DENOMINATOR = 4


@dataclass(frozen=True)
class LaurentPoly:
    """Immutable sparse polynomial: sorted (numerator, coefficient) pairs.

    Numerators are quarter-units: the term (num, c) is c * t^(num/4).
    Zero coefficients are never stored.
    """

    terms: tuple[tuple[int, int], ...]

    @staticmethod
    def from_dict(d: dict[int, int]) -> "LaurentPoly":
        return LaurentPoly(tuple(sorted((n, c) for n, c in d.items() if c != 0)))

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly(())

    @staticmethod
    def one() -> "LaurentPoly":
        return LaurentPoly(((0, 1),))

    @staticmethod
    def monomial(coeff: int, num: int, den: int = 1) -> "LaurentPoly":
        """coeff * t^(num/den) with den dividing 4."""
        if EXPONENT_DENOMINATOR % den != 0:
            raise DomainError(f"exponent denominator must divide 4, got {den}")
        if coeff == 0:
            return LaurentPoly.zero()
        return LaurentPoly(((num * (EXPONENT_DENOMINATOR // den), coeff),))

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        d = dict(self.terms)
        for n, c in other.terms:
            d[n] = d.get(n, 0) + c
        return LaurentPoly.from_dict(d)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(tuple((n, -c) for n, c in self.terms))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        d: dict[int, int] = {}
        for n1, c1 in self.terms:
            for n2, c2 in other.terms:
                n = n1 + n2
                d[n] = d.get(n, 0) + c1 * c2
        return LaurentPoly.from_dict(d)

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise DomainError("negative powers of a polynomial are not defined")
        out = LaurentPoly.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, coeff: int) -> "LaurentPoly":
        if coeff == 0:
            return LaurentPoly.zero()
        return LaurentPoly(tuple((n, c * coeff) for n, c in self.terms))

    def shift(self, num: int, den: int = 1) -> "LaurentPoly":
        """Multiply by t^(num/den)."""
        step = num * (EXPONENT_DENOMINATOR // den)
        if EXPONENT_DENOMINATOR % den != 0:
            raise DomainError(f"exponent denominator must divide 4, got {den}")
        return LaurentPoly(tuple((n + step, c) for n, c in self.terms))

    def substitute_power(self, k: Fraction) -> "LaurentPoly":
        """Replace t by t^k; every scaled exponent must stay on the lattice."""
        k = Fraction(k)
        d: dict[int, int] = {}
        for n, c in self.terms:
            scaled = Fraction(n, EXPONENT_DENOMINATOR) * k * EXPONENT_DENOMINATOR
            if scaled.denominator != 1:
                raise DomainError(
                    f"exponent {n}/4 * {k} leaves the quarter-integer lattice"
                )
            m = int(scaled)
            d[m] = d.get(m, 0) + c
        return LaurentPoly.from_dict(d)

    def evaluate(self, value: complex) -> complex:
        """Evaluate at an arbitrary nonzero complex number, principal powers."""
        if value == 0:
            raise DomainError("cannot evaluate a Laurent polynomial at 0")
        total = 0j
        for n, c in self.terms:
            total += c * value ** (n / EXPONENT_DENOMINATOR)
        return total

    def to_json_terms(self) -> list[dict[str, object]]:
        return [
            {"num": n, "den": EXPONENT_DENOMINATOR, "coeff": str(c)}
            for n, c in self.terms
        ]

    @staticmethod
    def from_json_terms(items: list[dict[str, object]]) -> "LaurentPoly":
        d: dict[int, int] = {}
        for item in items:
            try:
                num = int(item["num"])  # type: ignore[arg-type]
                den = int(item["den"])  # type: ignore[arg-type]
                coeff = int(str(item["coeff"]))
            except (KeyError, ValueError, TypeError) as exc:
                raise ParseError(f"malformed polynomial term {item!r}") from exc
            if den != EXPONENT_DENOMINATOR:
                raise ParseError(f"expected denominator 4, got {den}")
            d[num] = d.get(num, 0) + coeff
        return LaurentPoly.from_dict(d)

    def format(self, var: str = "t") -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for n, c in self.terms:
            e = Fraction(n, EXPONENT_DENOMINATOR)
            if e == 0:
                body = str(abs(c))
            else:
                exp = str(e) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                body = f"{mag}{var}^{exp}"
            sign = "-" if c < 0 else "+"
            parts.append(f"{sign} {body}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __str__(self) -> str:
        return self.format()


def evaluate_at_root(p: LaurentPoly, r: int) -> complex:
    """Evaluate p at the primitive root q = exp(2*pi*i/r).

    Fractional powers use the principal branch q^(k/4) = exp(2*pi*i*k/(4*r)).
    """
    if r < 1:
        raise DomainError(f"root order must be >= 1, got {r}")
    total = 0j
    for n, c in p.terms:
        total += c * cmath.exp(2j * cmath.pi * n / (EXPONENT_DENOMINATOR * r))
    return total

"""Exact Jones polynomial by two independent routes.

Route one is the Kauffman bracket as a brute-force state sum over all
2^c smoothings of a diagram; route two represents the braid group inside
the Temperley-Lieb diagram algebra and takes the Markov trace.  The two
must agree exactly, which is the backbone correctness check for the
whole package.

Conventions pinned here once and used everywhere: the bracket variable
is A with loop value delta = -A^2 - A^-2; a positive crossing smooths
with weight A on the smoothing that joins slot 0 to slot 3; the Jones
variable is t = A^-4 and the writhe factor is (-A^3)^(-w).  Under these
choices a positive kink contributes -A^3 and the right-handed trefoil
comes out in negative powers of t.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .braid import BraidWord
from .diagram import LinkDiagram, closure_trace
from .errors import DomainError, LimitError
from .laurent import LaurentPoly

__all__ = [
    "kauffman_bracket",
    "jones_polynomial",
    "tl_generator_images",
    "markov_trace_jones",
    "TLMatrixRep",
    "noncrossing_matchings",
    "LOOP_VALUE",
]

DEFAULT_CROSSING_LIMIT = 20
DEFAULT_TL_STRANDS = 10

# delta = -A^2 - A^-2 (exponent numerators are quarter-units)
LOOP_VALUE = LaurentPoly.from_dict({8: -1, -8: -1})


def _crossing_limit(limit: int | None) -> int:
    if limit is not None:
        return limit
    env = os.environ.get("KNIT_CROSSING_LIMIT")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise DomainError(f"KNIT_CROSSING_LIMIT is not an integer: {env!r}")
    return DEFAULT_CROSSING_LIMIT


def kauffman_bracket(d: LinkDiagram, limit: int | None = None) -> LaurentPoly:
    """Bracket polynomial in A over all smoothing states, exactly.

    The A-smoothing joins slot 0 to slot 3 and slot 1 to slot 2; the
    B-smoothing joins 0-1 and 2-3.  Each state contributes
    A^(#A - #B) * delta^(loops - 1), counting free circles as loops.
    Raises LimitError past the crossing limit (default 20, or the
    KNIT_CROSSING_LIMIT environment variable).
    """
    problems = d.validate()
    if problems:
        raise DomainError("invalid diagram: " + "; ".join(problems))
    c = d.crossing_count()
    cap = _crossing_limit(limit)
    if c > cap:
        raise LimitError(
            f"state sum over {c} crossings exceeds the limit {cap}"
        )
    if c == 0 and d.unknot_count == 0:
        raise DomainError("the empty diagram has no bracket")

    # two occurrences of each edge, as flat node ids 4*crossing + slot
    occurrence: dict[int, list[int]] = {}
    for ci, cr in enumerate(d.crossings):
        for si, e in enumerate(cr.edges):
            occurrence.setdefault(e, []).append(4 * ci + si)
    base = list(range(4 * c))

    def find(parent, x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(parent, a, b):
        ra, rb = find(parent, a), find(parent, b)
        if ra != rb:
            parent[rb] = ra

    for ends in occurrence.values():
        union(base, ends[0], ends[1])

    delta_powers = [LaurentPoly.one()]

    total: dict[int, int] = {}
    for state in range(1 << c):
        parent = base.copy()
        b_count = 0
        for ci in range(c):
            k = 4 * ci
            if (state >> ci) & 1:
                b_count += 1
                union(parent, k, k + 1)
                union(parent, k + 2, k + 3)
            else:
                union(parent, k, k + 3)
                union(parent, k + 1, k + 2)
        loops = len({find(parent, x) for x in range(4 * c)})
        loops += d.unknot_count
        while loops > len(delta_powers):
            delta_powers.append(delta_powers[-1] * LOOP_VALUE)
        weight = 4 * (c - 2 * b_count)  # A^(#A - #B) in quarter-units
        for num, coeff in delta_powers[loops - 1].terms:
            key = num + weight
            total[key] = total.get(key, 0) + coeff
    return LaurentPoly.from_dict(total)


def _writhe_correction(w: int) -> LaurentPoly:
    # (-A^3)^(-w) as a polynomial in A
    return LaurentPoly.monomial(-1 if w % 2 else 1, -12 * w, 4)


def jones_polynomial(d: LinkDiagram, limit: int | None = None) -> LaurentPoly:
    """Jones polynomial in t: writhe-corrected bracket with t = A^-4."""
    bracket = kauffman_bracket(d, limit)
    corrected = _writhe_correction(d.writhe()) * bracket
    return corrected.substitute_power(Fraction(-1, 4))


def noncrossing_matchings(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """All non-crossing perfect matchings of 2n circle points, Catalan(n)."""
    return _noncrossing(2 * n)


@lru_cache(maxsize=None)
def _noncrossing(points: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    if points == 0:
        return ((),)
    out = []
    for k in range(1, points, 2):
        for inside in _noncrossing(k - 1):
            shifted_in = tuple((a + 1, b + 1) for a, b in inside)
            for outside in _noncrossing(points - k - 1):
                shifted_out = tuple((a + k + 1, b + k + 1) for a, b in outside)
                out.append(
                    tuple(sorted(((0, k),) + shifted_in + shifted_out))
                )
    return tuple(out)


def _identity_matching(n: int) -> tuple[tuple[int, int], ...]:
    # top position p is circle point p; bottom position p is 2n-1-p
    return tuple(sorted((p, 2 * n - 1 - p) for p in range(n)))


def _cupcap_matching(n: int, i: int) -> tuple[tuple[int, int], ...]:
    pairs = [(i - 1, i), (2 * n - 1 - (i - 1), 2 * n - 1 - i)]
    for p in range(n):
        if p not in (i - 1, i):
            pairs.append((p, 2 * n - 1 - p))
    return tuple(sorted(tuple(sorted(q)) for q in pairs))


def _compose(n: int, upper, lower) -> tuple[tuple[tuple[int, int], ...], int]:
    """Stack ``lower`` below ``upper``; matching of the result plus the
    number of closed loops swallowed at the interface."""
    # nodes: 0..n-1 upper top, n..2n-1 interface, 2n..3n-1 lower bottom
    parent = list(range(3 * n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    def upper_node(idx):
        return idx if idx < n else n + (2 * n - 1 - idx)

    def lower_node(idx):
        return n + idx if idx < n else 2 * n + (2 * n - 1 - idx)

    for a, b in upper:
        union(upper_node(a), upper_node(b))
    for a, b in lower:
        union(lower_node(a), lower_node(b))

    external: dict[int, list[int]] = {}
    for p in range(n):
        external.setdefault(find(p), []).append(p)
        external.setdefault(find(2 * n + p), []).append(2 * n - 1 - p)
    pairs = []
    for members in external.values():
        pairs.append(tuple(sorted(members)))
    interface_roots = {find(n + p) for p in range(n)}
    loops = len(interface_roots - set(external))
    return tuple(sorted(pairs)), loops


def _closure_loops(n: int, matching) -> int:
    parent = list(range(2 * n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in matching:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
    for p in range(n):
        ra, rb = find(p), find(2 * n - 1 - p)
        if ra != rb:
            parent[rb] = ra
    return len({find(x) for x in range(2 * n)})


@dataclass(frozen=True)
class TLMatrixRep:
    """Sparse generator images over the non-crossing diagram basis.

    ``pos[i]`` and ``neg[i]`` are the images of the i-th generator and
    its inverse, as column dicts: image[col][row] is the coefficient (a
    polynomial in A) of basis element ``row`` in the image of ``col``.
    """

    n: int
    basis: tuple[tuple[tuple[int, int], ...], ...]
    pos: tuple[dict, ...]
    neg: tuple[dict, ...]

    def index_of(self, matching) -> int:
        return self.basis.index(matching)

    def matrix_product(self, left: dict, right: dict) -> dict:
        out: dict[int, dict[int, LaurentPoly]] = {}
        for col, column in right.items():
            acc: dict[int, LaurentPoly] = {}
            for mid, coeff in column.items():
                for row, c2 in left.get(mid, {}).items():
                    prior = acc.get(row, LaurentPoly.zero())
                    acc[row] = prior + coeff * c2
            cleaned = {r: v for r, v in acc.items() if not v.is_zero()}
            if cleaned:
                out[col] = cleaned
        return out

    def identity_matrix(self) -> dict:
        return {
            j: {j: LaurentPoly.one()} for j in range(len(self.basis))
        }


def tl_generator_images(n: int, limit: int = DEFAULT_TL_STRANDS) -> TLMatrixRep:
    """Images of every generator and inverse on the diagram basis.

    A positive generator maps to A*Id + A^-1*E_i; cup-cap composition
    absorbs closed loops as powers of delta.
    """
    if n < 2 or n > limit:
        raise DomainError(f"strand count {n} outside 2..{limit}")
    basis = noncrossing_matchings(n)
    index = {m: k for k, m in enumerate(basis)}
    a_plus = LaurentPoly.monomial(1, 1)  # A
    a_minus = LaurentPoly.monomial(1, -1)
    pos = []
    neg = []
    for i in range(1, n):
        cupcap = _cupcap_matching(n, i)
        images_pos: dict[int, dict[int, LaurentPoly]] = {}
        images_neg: dict[int, dict[int, LaurentPoly]] = {}
        for col, m in enumerate(basis):
            composed, loops = _compose(n, m, cupcap)
            scale = LOOP_VALUE**loops
            row = index[composed]
            for images, straight, bent in (
                (images_pos, a_plus, a_minus),
                (images_neg, a_minus, a_plus),
            ):
                column: dict[int, LaurentPoly] = {col: straight}
                extra = bent * scale
                column[row] = column.get(row, LaurentPoly.zero()) + extra
                images[col] = {
                    r: v for r, v in column.items() if not v.is_zero()
                }
        pos.append(images_pos)
        neg.append(images_neg)
    return TLMatrixRep(n, basis, tuple(pos), tuple(neg))


def markov_trace_jones(
    w: BraidWord, limit: int = DEFAULT_TL_STRANDS
) -> LaurentPoly:
    """Jones polynomial of the trace closure through the TL representation.

    Propagates the identity diagram through the word, closes every basis
    diagram, weights by delta^(loops-1), applies the writhe correction
    and lands in t.  Agrees exactly with the state-sum route.
    """
    n = w.index
    if n > limit:
        raise DomainError(f"strand count {n} beyond the diagram-basis limit {limit}")
    a_plus = LaurentPoly.monomial(1, 1)
    a_minus = LaurentPoly.monomial(1, -1)
    vector: dict[tuple, LaurentPoly] = {_identity_matching(n): LaurentPoly.one()}
    for gen, sign in w.letters:
        cupcap = _cupcap_matching(n, gen)
        straight, bent = (a_plus, a_minus) if sign > 0 else (a_minus, a_plus)
        nxt: dict[tuple, LaurentPoly] = {}
        for m, coeff in vector.items():
            prior = nxt.get(m, LaurentPoly.zero())
            nxt[m] = prior + coeff * straight
            composed, loops = _compose(n, m, cupcap)
            term = coeff * bent * LOOP_VALUE**loops
            prior = nxt.get(composed, LaurentPoly.zero())
            nxt[composed] = prior + term
        vector = {m: v for m, v in nxt.items() if not v.is_zero()}

    bracket = LaurentPoly.zero()
    for m, coeff in vector.items():
        loops = _closure_loops(n, m)
        bracket = bracket + coeff * LOOP_VALUE ** (loops - 1)
    corrected = _writhe_correction(w.exponent_sum()) * bracket
    return corrected.substitute_power(Fraction(-1, 4))

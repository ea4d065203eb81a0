"""Colored link invariants from quantum SU(2) braiding at a root of unity.

Everything here works at ``q = exp(2*pi*i/r)`` for an integer root
parameter ``r >= 3``.  Colors are spins ``j`` in half-integer steps,
stored as ``2j`` so all bookkeeping stays integral.

The braiding machinery acts on *coupled* bases rather than on tensor
products of single-strand bases.  A basis vector for strands colored
``(j_1, ..., j_n)`` is a fusion path: the sequence of total spins
obtained by absorbing one strand at a time, each step constrained to
the nondegenerate coupling channels of the root.  On that basis the
half-twist of two adjacent strands is the conjugate, by recoupling
matrices, of a diagonal phase per coupling channel -- which keeps every
operator exactly unitary at the root, something the naive tensor basis
cannot do because its channel subspaces fail to be orthogonal there.

A plat-closed braid is evaluated as a single matrix element of the
braided word between the standard cap and cup paths, then corrected by
per-component framing phases and bend signs so the result is an ambient
isotopy invariant normalized to ``[2j+1]_q`` on the color-``j`` unknot.
With every color 1/2 this reproduces the Jones values computed from the
exact bracket route (see ``jones_value_from_plat``).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .braid import BraidWord
from .diagram import plat_profile
from .errors import DomainError, LimitError

__all__ = [
    "DENSE_LIMIT",
    "UNITARITY_TOL",
    "BraidingOperator",
    "ColorLabel",
    "ColoredSpace",
    "DegenerateColorError",
    "as_color",
    "braiding_channel_phases",
    "braiding_operator_for_plat",
    "braiding_operator_for_word",
    "colored_invariant",
    "fusion_range",
    "jones_value_from_plat",
    "normalize_ambient",
    "q_clebsch_gordan",
    "q_integer",
    "r_matrix",
]

# Largest tensor-product dimension r_matrix will realize densely.
DENSE_LIMIT = 4096

# Every constructed braiding operator is checked against this bound.
UNITARITY_TOL = 1e-10

# A positive braid letter applies the reciprocal of the channel phase
# below (its inverse applies the phase itself).  The sign convention is
# pinned once, by requiring the all-spin-1/2 plat contraction to agree
# with the exact bracket-route Jones values at the same root; the tests
# assert that agreement.
_POSITIVE_CROSSING_EXPONENT = -1


class DegenerateColorError(DomainError):
    """A color or coupling channel with no braiding headroom at this root.

    The coupled-basis machinery needs every strand color to satisfy
    ``2j <= r - 2``; beyond that bound the quantum weights that enter
    square roots vanish or turn negative and no unitary braiding exists.
    """


# ---------------------------------------------------------------------------
# colors


@dataclass(frozen=True, order=True)
class ColorLabel:
    """A spin color ``j``, stored as the integer ``2j``."""

    twice_j: int

    def __post_init__(self):
        if not isinstance(self.twice_j, int) or isinstance(self.twice_j, bool):
            raise DomainError(f"color needs an integer doubled spin, got {self.twice_j!r}")
        if self.twice_j < 0:
            raise DomainError(f"color spin must be nonnegative, got {self.twice_j}/2")

    @property
    def j(self) -> Fraction:
        return Fraction(self.twice_j, 2)

    @property
    def dimension(self) -> int:
        """Classical multiplet size 2j + 1."""
        return self.twice_j + 1

    def admissible_for(self, r: int) -> bool:
        """Whether the label exists at root ``r`` (j <= r)."""
        return self.twice_j <= 2 * r

    def __str__(self) -> str:
        j = self.j
        return f"{j.numerator}/{j.denominator}" if j.denominator == 2 else str(j.numerator)


def as_color(value) -> ColorLabel:
    """Coerce ``value`` to a ColorLabel.

    Accepts a ColorLabel, an integer doubled spin (the CLI convention:
    ``1`` means spin 1/2), or an exact half-integral Fraction/float spin.
    """
    if isinstance(value, ColorLabel):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return ColorLabel(value)
    if isinstance(value, (Fraction, float)):
        doubled = Fraction(value) * 2
        if doubled.denominator != 1:
            raise DomainError(f"spin must be a half-integer, got {value}")
        return ColorLabel(int(doubled))
    raise DomainError(f"cannot read {value!r} as a color")


def _check_root(r: int, minimum: int = 3):
    if not isinstance(r, int) or isinstance(r, bool):
        raise DomainError(f"root parameter must be an integer, got {r!r}")
    if r < minimum:
        raise DomainError(f"root parameter too small: need r >= {minimum}, got {r}")


def _check_admissible(color: ColorLabel, r: int):
    if not color.admissible_for(r):
        raise DomainError(f"color j = {color} is not admissible at r = {r} (needs j <= r)")


def _check_braidable(color: ColorLabel, r: int):
    _check_admissible(color, r)
    if color.twice_j > r - 2:
        raise DegenerateColorError(
            f"color j = {color} is degenerate at r = {r}: braiding needs 2j <= r - 2"
        )


# ---------------------------------------------------------------------------
# quantum weights


def q_integer(m: int, r: int) -> complex:
    """The quantum integer ``[m]_q`` at ``q = exp(2*pi*i/r)``.

    Defined through ``(q^{m/2} - q^{-m/2}) / (q^{1/2} - q^{-1/2})``,
    which collapses to the real number ``sin(m*pi/r)/sin(pi/r)``.
    """
    if not isinstance(m, int) or isinstance(m, bool) or m <= 0:
        raise DomainError(f"quantum integer index must be a positive integer, got {m!r}")
    _check_root(r)
    return complex(math.sin(m * math.pi / r) / math.sin(math.pi / r))


def _qnum(n: int, r: int) -> float:
    """Real value of [n]_q; valid for 0 <= n <= r."""
    return math.sin(n * math.pi / r) / math.sin(math.pi / r)


def _qnum_positive(n: int, r: int) -> float:
    """[n]_q restricted to the range where it is strictly positive."""
    if n >= r:
        raise DegenerateColorError(
            f"quantum weight [{n}] vanishes or turns negative at r = {r}"
        )
    return _qnum(n, r)


@lru_cache(maxsize=None)
def _qfact(n: int, r: int) -> float:
    """Quantum factorial [n]! over the strictly positive range."""
    out = 1.0
    for k in range(2, n + 1):
        out *= _qnum_positive(k, r)
    return out


def _qdim(twice_j: int, r: int) -> float:
    """Quantum dimension [2j + 1]_q of the spin-j multiplet."""
    return _qnum(twice_j + 1, r)


# ---------------------------------------------------------------------------
# fusion


def fusion_range(j1, j2, r: int) -> list[ColorLabel]:
    """Colors ``j`` with ``|j1 - j2| <= j <= min(j1 + j2, r - j1 - j2)``.

    The upper truncation is what distinguishes the root-of-unity theory
    from classical angular momentum coupling; the list may be empty.
    """
    c1, c2 = as_color(j1), as_color(j2)
    _check_root(r)
    _check_admissible(c1, r)
    _check_admissible(c2, r)
    t1, t2 = c1.twice_j, c2.twice_j
    hi = min(t1 + t2, 2 * r - t1 - t2)
    return [ColorLabel(t) for t in range(abs(t1 - t2), hi + 1, 2)]


def _channels(t1: int, t2: int, r: int) -> range:
    """Doubled labels of the nondegenerate coupling channels at root r.

    Tighter than ``fusion_range``: the top is cut at the root's level so
    every listed channel has braiding headroom (see DegenerateColorError).
    """
    hi = min(t1 + t2, 2 * (r - 2) - t1 - t2)
    return range(abs(t1 - t2), hi + 1, 2)


def _triple_allowed(ta: int, tb: int, tc: int, r: int) -> bool:
    """Parity, triangle and level constraints on a coupling triple."""
    return (
        (ta + tb + tc) % 2 == 0
        and abs(ta - tb) <= tc <= ta + tb
        and ta + tb + tc <= 2 * (r - 2)
    )


# ---------------------------------------------------------------------------
# recoupling


def _triangle_weight(ta: int, tb: int, tc: int, r: int) -> float:
    num = (
        _qfact((-ta + tb + tc) // 2, r)
        * _qfact((ta - tb + tc) // 2, r)
        * _qfact((ta + tb - tc) // 2, r)
    )
    return math.sqrt(num / _qfact((ta + tb + tc) // 2 + 1, r))


@lru_cache(maxsize=None)
def _six_j(ta: int, tb: int, te: int, tc: int, td: int, tf: int, r: int) -> float:
    """Recoupling symbol on doubled labels; zero off the allowed triples."""
    for tri in ((ta, tb, te), (ta, td, tf), (tc, tb, tf), (tc, td, te)):
        if not _triple_allowed(*tri, r):
            return 0.0
    lows = [
        (ta + tb + te) // 2,
        (ta + td + tf) // 2,
        (tc + tb + tf) // 2,
        (tc + td + te) // 2,
    ]
    highs = [
        (ta + tb + tc + td) // 2,
        (tb + te + td + tf) // 2,
        (ta + te + tc + tf) // 2,
    ]
    prefactor = (
        _triangle_weight(ta, tb, te, r)
        * _triangle_weight(ta, td, tf, r)
        * _triangle_weight(tc, tb, tf, r)
        * _triangle_weight(tc, td, te, r)
    )
    total = 0.0
    for z in range(max(lows), min(highs) + 1):
        if z + 1 >= r:
            # the [z+1]! numerator carries a vanishing quantum weight
            continue
        term = (-1) ** z * _qfact(z + 1, r)
        for low in lows:
            term /= _qfact(z - low, r)
        for high in highs:
            term /= _qfact(high - z, r)
        total += term
    return prefactor * total


@lru_cache(maxsize=None)
def _recoupling(tx: int, t1: int, t2: int, ty: int, r: int):
    """Unitary change of coupling order between (x(12))y and ((x1)2)y.

    In a run ``x -> t1 -> t2`` of a fusion path from ``x`` to ``y``,
    rows are the possible middle labels (x absorbing t1) and columns the
    coupling channels of the pair (t1, t2); the matrix converts between
    the path basis and the basis where the pair couples to a definite
    channel first.
    """
    middles = tuple(a for a in _channels(tx, t1, r) if _triple_allowed(a, t2, ty, r))
    channels = tuple(e for e in _channels(t1, t2, r) if _triple_allowed(tx, e, ty, r))
    mat = np.zeros((len(middles), len(channels)))
    sign = (-1) ** ((tx + t1 + t2 + ty) // 2)
    for i, mid in enumerate(middles):
        for k, chan in enumerate(channels):
            mat[i, k] = (
                sign
                * math.sqrt(_qdim(mid, r) * _qdim(chan, r))
                * _six_j(tx, t1, mid, t2, ty, chan, r)
            )
    mat.flags.writeable = False
    return middles, channels, mat


def _braid_phase(ta: int, tb: int, tch: int, r: int) -> complex:
    """Phase a half-twist contributes on coupling channel ``tch``.

    Equal to ``(-1)^(j_a + j_b - j) * q^((c_j - c_ja - c_jb)/2)`` with
    ``c_j = j (j + 1)`` the quadratic Casimir eigenvalue.
    """
    sign = (-1) ** ((ta + tb - tch) // 2)
    exponent = (tch * (tch + 2) - ta * (ta + 2) - tb * (tb + 2)) / 8.0
    return sign * cmath.exp(2j * math.pi * exponent / r)


# ---------------------------------------------------------------------------
# fusion-path spaces


@lru_cache(maxsize=None)
def _paths(colors: tuple[int, ...], r: int) -> tuple[tuple[int, ...], ...]:
    """All fusion paths for the given doubled colors, lexicographic.

    A path starts at total 0 and absorbs one color per step through the
    nondegenerate channels; the final total is unconstrained.
    """
    found: list[tuple[int, ...]] = []

    def extend(prefix: list[int]):
        depth = len(prefix) - 1
        if depth == len(colors):
            found.append(tuple(prefix))
            return
        for nxt in _channels(prefix[-1], colors[depth], r):
            prefix.append(nxt)
            extend(prefix)
            prefix.pop()

    extend([0])
    return tuple(found)


def _standard_path(colors: tuple[int, ...]) -> tuple[int, ...]:
    """The cap/cup contraction path: up to each odd strand, back to 0 after.

    Well-defined exactly when consecutive strands pair up with equal
    colors, which is what the plat boundary requires.
    """
    path = [0]
    for k, t in enumerate(colors):
        path.append(path[-1] + t if k % 2 == 0 else path[-1] - t)
    if path[-1] != 0:
        raise DomainError("cap colors do not pair up; no contraction path exists")
    return tuple(path)


@dataclass(frozen=True)
class ColoredSpace:
    """An ordered list of strand colors at a fixed root.

    ``dimension`` is the classical tensor-product size the coloring
    describes; the braiding matrices act on the coupled fusion-path
    basis, whose size is ``coupled_dimension``.
    """

    factors: tuple[ColorLabel, ...]
    r: int

    def __init__(self, factors, r: int):
        object.__setattr__(self, "factors", tuple(as_color(f) for f in factors))
        object.__setattr__(self, "r", r)
        _check_root(r)
        for color in self.factors:
            _check_admissible(color, r)

    @property
    def dimension(self) -> int:
        """Product of the classical multiplet sizes (2j_i + 1)."""
        return math.prod(color.dimension for color in self.factors)

    @property
    def doubled(self) -> tuple[int, ...]:
        return tuple(color.twice_j for color in self.factors)

    def paths(self) -> tuple[tuple[int, ...], ...]:
        """The coupled fusion-path basis, in lexicographic order."""
        for color in self.factors:
            _check_braidable(color, self.r)
        return _paths(self.doubled, self.r)

    @property
    def coupled_dimension(self) -> int:
        return len(self.paths())

    def swapped(self, position: int) -> "ColoredSpace":
        """The space with factors ``position`` and ``position + 1`` exchanged."""
        if not 1 <= position <= len(self.factors) - 1:
            raise DomainError(
                f"swap position must lie in 1..{len(self.factors) - 1}, got {position}"
            )
        factors = list(self.factors)
        factors[position - 1], factors[position] = factors[position], factors[position - 1]
        return ColoredSpace(tuple(factors), self.r)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.factors) + f") at r={self.r}"


@dataclass(frozen=True, eq=False)
class BraidingOperator:
    """A unitary braiding matrix on the coupled basis, with its spaces.

    ``matrix`` maps coefficients on ``domain.paths()`` to coefficients
    on ``codomain.paths()``; the codomain's colors are the domain's with
    the braided strands exchanged.
    """

    matrix: np.ndarray
    domain: ColoredSpace
    codomain: ColoredSpace

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)
        expected = (self.codomain.coupled_dimension, self.domain.coupled_dimension)
        if mat.shape != expected:
            raise DomainError(f"matrix shape {mat.shape} does not match spaces {expected}")
        if self.unitarity_defect() > UNITARITY_TOL:
            raise DomainError("braiding matrix failed the unitarity bound")

    def unitarity_defect(self) -> float:
        gram = self.matrix.conj().T @ self.matrix
        return float(np.abs(gram - np.eye(gram.shape[0])).max())

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(amplitudes, dtype=complex)

    def then(self, later: "BraidingOperator") -> "BraidingOperator":
        """The composite that acts with ``self`` first."""
        if later.domain != self.codomain:
            raise DomainError("composition mismatch: codomain and domain colors differ")
        return BraidingOperator(later.matrix @ self.matrix, self.domain, later.codomain)

    def inverse(self) -> "BraidingOperator":
        return BraidingOperator(self.matrix.conj().T, self.codomain, self.domain)


# ---------------------------------------------------------------------------
# elementary braiding


def _elementary_matrix(colors: tuple[int, ...], position: int, sign: int, r: int):
    """Half-twist of strands ``position``, ``position + 1`` (1-based).

    Returns the swapped coloring and the matrix on the fusion-path
    bases.  On each path the twist recouples the two strands into their
    mutual channel, applies the channel phase (or its reciprocal, per
    the letter sign), and recouples back; only the local total between
    the strands changes, so the matrix is block sparse.
    """
    ci, cj = colors[position - 1], colors[position]
    swapped = list(colors)
    swapped[position - 1], swapped[position] = cj, ci
    swapped = tuple(swapped)
    dom = _paths(colors, r)
    cod = _paths(swapped, r)
    cod_index = {path: k for k, path in enumerate(cod)}
    mat = np.zeros((len(cod), len(dom)), dtype=complex)
    exponent = _POSITIVE_CROSSING_EXPONENT * sign
    phase_of = {
        chan: _braid_phase(ci, cj, chan, r) ** exponent for chan in _channels(ci, cj, r)
    }
    for col, path in enumerate(dom):
        below, above = path[position - 1], path[position + 1]
        mids_in, channels, rec_in = _recoupling(below, ci, cj, above, r)
        mids_out, channels_out, rec_out = _recoupling(below, cj, ci, above, r)
        # coupling channels ignore the order of the pair
        assert channels == channels_out
        phases = np.array([phase_of[chan] for chan in channels])
        amps = rec_out @ (phases * rec_in[mids_in.index(path[position])])
        for mid_label, amp in zip(mids_out, amps):
            if amp == 0:
                continue
            target = list(path)
            target[position] = mid_label
            mat[cod_index[tuple(target)], col] += amp
    return swapped, mat


def braiding_channel_phases(j1, j2, r: int) -> dict[ColorLabel, complex]:
    """Eigenphase a positive letter applies on each coupling channel."""
    c1, c2 = as_color(j1), as_color(j2)
    _check_root(r)
    _check_braidable(c1, r)
    _check_braidable(c2, r)
    return {
        ColorLabel(t): _braid_phase(c1.twice_j, c2.twice_j, t, r)
        ** _POSITIVE_CROSSING_EXPONENT
        for t in _channels(c1.twice_j, c2.twice_j, r)
    }


def r_matrix(j1, j2, r: int) -> BraidingOperator:
    """The two-strand braiding operator for a positive crossing.

    Diagonal on the coupled basis: channel ``j`` carries the phase
    ``(-1)^(j1 + j2 - j) q^((c_j - c_j1 - c_j2)/2)`` up to the global
    orientation convention pinned by the spin-1/2 Jones agreement.
    Composing with its inverse gives the identity exactly.
    """
    c1, c2 = as_color(j1), as_color(j2)
    _check_root(r)
    _check_admissible(c1, r)
    _check_admissible(c2, r)
    if c1.dimension * c2.dimension > DENSE_LIMIT:
        raise LimitError(
            f"dense limit exceeded: {c1.dimension * c2.dimension} > {DENSE_LIMIT}"
        )
    _check_braidable(c1, r)
    _check_braidable(c2, r)
    domain = ColoredSpace((c1, c2), r)
    swapped, mat = _elementary_matrix(domain.doubled, 1, 1, r)
    return BraidingOperator(mat, domain, ColoredSpace((c2, c1), r))


def _word_matrix(w: BraidWord, colors: tuple[int, ...], r: int):
    """Ordered product of elementary twists; returns final colors and matrix."""
    current = colors
    total = np.eye(len(_paths(colors, r)), dtype=complex)
    for generator, sign in w.letters:
        current, step = _elementary_matrix(current, generator, sign, r)
        total = step @ total
    return current, total


def braiding_operator_for_word(w: BraidWord, colors, r: int) -> BraidingOperator:
    """Braid a colored strand family by ``w``, with no closure conditions.

    ``colors`` lists one color per strand, top to bottom of the word;
    the codomain's colors are the domain's pushed through the word's
    permutation.
    """
    labels = tuple(as_color(c) for c in colors)
    if len(labels) != w.index:
        raise DomainError(f"need {w.index} strand colors, got {len(labels)}")
    _check_root(r)
    for color in labels:
        _check_braidable(color, r)
    domain = ColoredSpace(labels, r)
    if domain.coupled_dimension > DENSE_LIMIT:
        raise LimitError(
            f"dense limit exceeded: {domain.coupled_dimension} > {DENSE_LIMIT}"
        )
    final, mat = _word_matrix(w, domain.doubled, r)
    return BraidingOperator(mat, domain, ColoredSpace(tuple(ColorLabel(t) for t in final), r))


def braiding_operator_for_plat(w: BraidWord, colors, r: int) -> BraidingOperator:
    """Braiding operator of a plat presentation, boundary-checked.

    Requires an even strand count and cap-compatible colors: strands
    (2i-1, 2i) must carry equal colors along the top, and the colors
    arriving at the bottom (after the word's permutation) must pair up
    the same way.
    """
    if w.index % 2:
        raise DomainError(f"plat closure needs an even braid index, got {w.index}")
    labels = tuple(as_color(c) for c in colors)
    if len(labels) != w.index:
        raise DomainError(f"need {w.index} strand colors, got {len(labels)}")
    for i in range(0, w.index, 2):
        if labels[i] != labels[i + 1]:
            raise DomainError(
                f"top cap ({i + 1}, {i + 2}) joins colors {labels[i]} and {labels[i + 1]}"
            )
    perm = w.permutation()
    at_bottom: list[ColorLabel | None] = [None] * w.index
    for k in range(1, w.index + 1):
        at_bottom[perm(k) - 1] = labels[k - 1]
    for i in range(0, w.index, 2):
        if at_bottom[i] != at_bottom[i + 1]:
            raise DomainError(
                f"bottom cup ({i + 1}, {i + 2}) joins colors {at_bottom[i]} and {at_bottom[i + 1]}"
            )
    return braiding_operator_for_word(w, labels, r)


# ---------------------------------------------------------------------------
# invariants


def _plat_pieces(w: BraidWord, colors, r: int):
    """Validated setup shared by the exact and the sampled contraction.

    Returns the plat profile, the doubled per-strand colors, and the
    scalar prefactor multiplying the cap-to-cup matrix element: quantum
    dimensions of the caps, per-component framing phases for self
    crossings, and per-component bend signs for the extra turns.
    """
    profile = plat_profile(w)
    count = profile.component_count
    _check_root(r)
    if r < count:
        raise DomainError(
            f"root parameter must be at least the component count: r = {r} < {count}"
        )
    labels = tuple(as_color(c) for c in colors)
    if len(labels) != count:
        raise DomainError(
            f"need one color per link component: got {len(labels)} for {count} components"
        )
    for color in labels:
        _check_braidable(color, r)

    pair_colors = tuple(labels[profile.pair_component[i]] for i in range(w.index // 2))
    strand_doubled = tuple(t for color in pair_colors for t in (color.twice_j,) * 2)

    prefactor = 1.0 + 0.0j
    for color in pair_colors:
        prefactor *= _qdim(color.twice_j, r)
    for comp in range(count):
        t = labels[comp].twice_j
        framing = _braid_phase(t, t, 0, r)
        prefactor *= framing ** (-profile.self_writhe[comp])
        prefactor *= ((-1) ** t) ** (profile.cup_count[comp] - 1)
    return profile, strand_doubled, prefactor


def colored_invariant(w: BraidWord, colors, r: int) -> complex:
    """Ambient isotopy invariant of the plat closure with one color per component.

    ``colors`` lists one color for each link component, in the order the
    components first touch the top boundary (the numbering of
    ``plat_pair_components``).  The value is the cap-to-cup matrix
    element of the braided word times the quantum dimension of every
    cap, corrected per component by the framing phase of its self
    crossings and the bend sign of its extra turns; the color-j unknot
    comes out at ``[2j+1]_q``.
    """
    _profile, strand_doubled, prefactor = _plat_pieces(w, colors, r)
    cap = _standard_path(strand_doubled)
    final, mat = _word_matrix(w, strand_doubled, r)
    cup = _standard_path(final)
    dom = _paths(strand_doubled, r)
    cod = _paths(final, r)
    element = complex(mat[cod.index(cup), dom.index(cap)])
    return prefactor * element


def jones_value_from_plat(w: BraidWord, r: int) -> complex:
    """Jones value of the plat closure at the root, unknot normalized.

    Evaluates the colored invariant with every component at spin 1/2 and
    rescales it onto the normalization where the unknot maps to 1: one
    quantum dimension is divided out and the inter-component linking
    picks up the spin-1/2 framing phase, with a component-count sign.
    The result matches evaluating the exact Jones polynomial of the same
    plat diagram at ``q = exp(2*pi*i/r)``.
    """
    profile = plat_profile(w)
    count = profile.component_count
    value = colored_invariant(w, (ColorLabel(1),) * count, r)
    framing = _braid_phase(1, 1, 0, r)
    linking = profile.linking_sum()
    return (-1) ** (count - 1) * framing ** (-2 * linking) * value / _qdim(1, r)


def normalize_ambient(value: complex, w_writhe: int, r: int) -> complex:
    """Writhe-compensated rescaling of a regular-isotopy evaluation.

    Multiplies by ``q^(-3w/4) / (q^(1/2) - q^(-1/2))`` at
    ``q = exp(2*pi*i/r)``, which cancels the phase a kink contributes
    and fixes the overall scale.
    """
    _check_root(r)
    if not isinstance(w_writhe, int) or isinstance(w_writhe, bool):
        raise DomainError(f"writhe must be an integer, got {w_writhe!r}")
    half = cmath.exp(1j * math.pi / r)  # q^{1/2}
    phase = cmath.exp(-3j * math.pi * w_writhe / (2 * r))  # q^{-3w/4}
    return value * phase / (half - 1 / half)


# ---------------------------------------------------------------------------
# coupling coefficients


def q_clebsch_gordan(j1, j2, j, r: int) -> dict[tuple[Fraction, Fraction, Fraction], complex]:
    """Coupling coefficients of channel ``j`` inside ``j1 (x) j2`` at the root.

    Returns ``{(m1, m2, m): coefficient}`` over the tensor basis, built
    by solving the balanced-coproduct highest-weight condition and
    walking down with the balanced lowering operator.  Columns are
    orthonormal in the bilinear (conjugation-free) pairing, which is the
    pairing the singlet caps of the plat contraction use; in the
    classical limit ``r -> infinity`` it collapses to the ordinary inner
    product and the table to the undeformed coefficients.  The highest
    weight coefficient at ``m1 = j1`` has positive real part.
    """
    c1, c2, cj = as_color(j1), as_color(j2), as_color(j)
    _check_root(r)
    if cj not in fusion_range(c1, c2, r):
        raise DomainError(
            f"channel j = {cj} is not in the fusion range of {c1} and {c2} at r = {r}"
        )
    t1, t2, tj = c1.twice_j, c2.twice_j, cj.twice_j
    for t in (t1, t2):
        if t > r - 2:
            raise DegenerateColorError(
                f"color j = {t}/2 is degenerate at r = {r}: coupling needs 2j <= r - 2"
            )

    def half_power(tm: int) -> complex:
        # q^{m/2} on a weight vector with doubled weight tm
        return cmath.exp(1j * math.pi * tm / (2 * r))

    def raise_coef(t: int, tm: int) -> float:
        return math.sqrt(
            _qnum_positive((t - tm) // 2, r) * _qnum_positive((t + tm) // 2 + 1, r)
        )

    def lower_coef(t: int, tm: int) -> float:
        return math.sqrt(
            _qnum_positive((t + tm) // 2, r) * _qnum_positive((t - tm) // 2 + 1, r)
        )

    # highest weight vector of the channel, seeded at the top m1
    head: dict[int, complex] = {t1: 1.0 + 0.0j}
    low = max(-t1, tj - t2)
    for tm1 in range(t1 - 2, low - 2, -2):
        above = head[tm1 + 2]
        lifted = raise_coef(t1, tm1) * half_power(tj - tm1)
        partner = half_power(-(tm1 + 2)) * raise_coef(t2, tj - tm1 - 2)
        head[tm1] = -above * partner / lifted
    column = {(tm1, tj - tm1): c for tm1, c in head.items()}
    norm = cmath.sqrt(sum(c * c for c in column.values()))
    column = {k: c / norm for k, c in column.items()}

    table: dict[tuple[Fraction, Fraction, Fraction], complex] = {}

    def record(tm: int, col: dict[tuple[int, int], complex]):
        for (tm1, tm2), coef in col.items():
            table[(Fraction(tm1, 2), Fraction(tm2, 2), Fraction(tm, 2))] = coef

    record(tj, column)
    tm = tj
    while tm - 2 >= -tj:
        lowered: dict[tuple[int, int], complex] = {}
        for (tm1, tm2), coef in column.items():
            if tm1 - 2 >= -t1:
                key = (tm1 - 2, tm2)
                lowered[key] = lowered.get(key, 0.0j) + coef * lower_coef(t1, tm1) * half_power(tm2)
            if tm2 - 2 >= -t2:
                key = (tm1, tm2 - 2)
                lowered[key] = lowered.get(key, 0.0j) + coef * half_power(-tm1) * lower_coef(t2, tm2)
        scale = math.sqrt(
            _qnum_positive((tj + tm) // 2, r) * _qnum_positive((tj - tm) // 2 + 1, r)
        )
        column = {k: c / scale for k, c in lowered.items()}
        tm -= 2
        record(tm, column)
    return table

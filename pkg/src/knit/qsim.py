"""Monte-Carlo estimation of plat invariants on a simulated quantum register.

The exact plat contraction behind ``colored_invariant`` is a single
matrix element of a unitary between two bend states.  This module
estimates that matrix element the way an interferometer would: prepare
the bend state, apply the braiding circuit one controlled crossing per
letter, and read out an ancilla whose bias is one quadrature of the
overlap.  A Hoeffding planner converts a target additive error and
success probability into a sample count, and every estimate records the
seed, the generator algorithm, and the rescaling factor needed to audit
or reproduce it.

The per-crossing step is the dense elementary braiding matrix acting on
the full fusion-path state vector, not a gate-level compilation: at desk
scale only the induced statistics matter, and those are exact here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .braid import BraidWord
from .diagram import plat_profile
from .errors import DomainError, LimitError
from .su2q import (
    BraidingOperator,
    ColorLabel,
    ColoredSpace,
    _braid_phase,
    _elementary_matrix,
    _paths,
    _plat_pieces,
    _qdim,
    _standard_path,
    colored_invariant,
    jones_value_from_plat,
)

__all__ = [
    "GENERATOR_ID",
    "SAMPLE_LIMIT",
    "StateVector",
    "TraceEstimate",
    "apply_unitary",
    "approx_jones",
    "bend_state",
    "estimate_markov_trace",
    "hadamard_test_sample",
    "plan_samples",
]

#: Identifier of the pseudo-random bit generator behind every sample.
GENERATOR_ID = "numpy-PCG64"

#: Largest per-quadrature sample budget an estimator will actually run.
SAMPLE_LIMIT = 10_000_000

NORM_TOL = 1e-10
UNITARY_TOL = 1e-10

_PART_INDEX = {"real": 0, "imag": 1}

#: Roots of unity where the evaluated invariant is classically tractable.
TRACTABLE_ROOTS = frozenset({2, 3, 4, 6})


@dataclass(frozen=True, eq=False)
class StateVector:
    """A normalized dense state of the simulated register.

    ``amplitudes`` is a complex vector of length 2^m for a register of
    m two-level factors, or of the coupled dimension of a
    ``ColoredSpace`` when ``space`` is given.  The norm must be 1
    within 1e-10.
    """

    amplitudes: np.ndarray
    space: ColoredSpace | None = None

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size == 0:
            raise DomainError("state amplitudes must form a nonempty vector")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        if self.space is not None and amps.size != self.space.coupled_dimension:
            raise DomainError(
                f"state length {amps.size} does not match the space dimension "
                f"{self.space.coupled_dimension}"
            )
        deviation = abs(np.linalg.norm(amps) - 1.0)
        if deviation > NORM_TOL:
            raise DomainError(f"state is not normalized: |norm - 1| = {deviation:.3e}")

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @classmethod
    def basis(cls, dimension: int, index: int, space: ColoredSpace | None = None):
        """The computational basis state at ``index``."""
        if not 0 <= index < dimension:
            raise DomainError(f"basis index {index} outside dimension {dimension}")
        amps = np.zeros(dimension, dtype=complex)
        amps[index] = 1.0
        return cls(amps, space)


def bend_state(space: ColoredSpace) -> StateVector:
    """The basis state contracting consecutive strand pairs with bends.

    Defined when the space's colors pair up (positions 1-2, 3-4, ...
    carry equal colors); this is the state a row of caps or cups
    prepares, and the one the plat estimators interfere against.
    """
    path = _standard_path(space.doubled)
    index = space.paths().index(path)
    return StateVector.basis(space.coupled_dimension, index, space)


def _square_unitary(matrix, tol: float = UNITARY_TOL) -> np.ndarray:
    mat = np.asarray(matrix, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DomainError(f"operator must be a square matrix, got shape {mat.shape}")
    defect = np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])).max()
    if defect > tol:
        raise DomainError(f"operator is not unitary: defect {defect:.3e}")
    return mat


def apply_unitary(psi: StateVector, U, targets=None) -> StateVector:
    """Apply a unitary to the register, returning the new state.

    ``U`` may be a ``BraidingOperator`` acting on the whole coupled
    space, or a plain unitary matrix.  A matrix may also act on a
    subset of two-level factors of a length-2^m state by listing the
    ``targets`` factor indices in order.  The norm is preserved and an
    identity operator is a no-op.
    """
    if isinstance(U, BraidingOperator):
        if targets is not None:
            raise DomainError("a whole-space braiding operator takes no target factors")
        if U.matrix.shape[1] != psi.dimension:
            raise DomainError(
                f"operator acts on dimension {U.matrix.shape[1]}, state has {psi.dimension}"
            )
        space = U.codomain if psi.space == U.domain else None
        return StateVector(U.matrix @ psi.amplitudes, space)

    mat = _square_unitary(U)
    if targets is None:
        if mat.shape[1] != psi.dimension:
            raise DomainError(
                f"operator acts on dimension {mat.shape[1]}, state has {psi.dimension}"
            )
        return StateVector(mat @ psi.amplitudes, psi.space)

    factors = psi.dimension.bit_length() - 1
    if 2**factors != psi.dimension:
        raise DomainError(
            f"targeted application needs a register of two-level factors, "
            f"got state length {psi.dimension}"
        )
    targets = tuple(targets)
    if len(set(targets)) != len(targets):
        raise DomainError(f"target factors must be distinct, got {targets}")
    for t in targets:
        if not isinstance(t, int) or isinstance(t, bool) or not 0 <= t < factors:
            raise DomainError(f"target factor {t!r} outside register of {factors}")
    if mat.shape[0] != 2 ** len(targets):
        raise DomainError(
            f"operator on {len(targets)} factors must have dimension "
            f"{2 ** len(targets)}, got {mat.shape[0]}"
        )
    tensor = psi.amplitudes.reshape((2,) * factors)
    moved = np.moveaxis(tensor, targets, range(len(targets)))
    mixed = (mat @ moved.reshape(2 ** len(targets), -1)).reshape(moved.shape)
    result = np.moveaxis(mixed, range(len(targets)), targets).reshape(-1)
    return StateVector(result)


def _reading_probability(reference: np.ndarray, branch: np.ndarray, part: str) -> float:
    """Chance the interferometer ancilla lands on +1 for one quadrature.

    The ancilla splits the register between the untouched ``reference``
    branch and the operated ``branch``; remixing (after a quarter turn
    on the ancilla for the imaginary part) puts the +1 outcome at
    amplitude (reference + phase * branch) / 2, so the reading averages
    to Re or Im of the branch overlap.
    """
    if part not in _PART_INDEX:
        raise DomainError(f"part must be 'real' or 'imag', got {part!r}")
    phase = 1.0 if part == "real" else -1.0j
    upper = 0.5 * (reference + phase * branch)
    return min(1.0, float(np.vdot(upper, upper).real))


def _reading(p_plus: float, entropy) -> int:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
    return 1 if rng.random() < p_plus else -1


def _check_entropy(rng_seed):
    flat = rng_seed if isinstance(rng_seed, (tuple, list)) else (rng_seed,)
    for part in flat:
        if not isinstance(part, int) or isinstance(part, bool) or part < 0:
            raise DomainError(
                f"seed must be a nonnegative integer or a tuple of them, got {rng_seed!r}"
            )
    return rng_seed


def hadamard_test_sample(U, psi: StateVector, part: str, rng_seed) -> int:
    """One ±1 ancilla reading whose mean is a quadrature of ⟨psi|U|psi⟩.

    Simulates the controlled-``U`` interferometer: the ancilla is
    split, ``U`` acts on the excited branch, the branches are remixed
    (with a quarter turn on the ancilla when ``part`` is ``"imag"``),
    and the ancilla is measured once under the Born rule.  The reading
    averages to Re⟨psi|U|psi⟩ for ``part="real"`` and Im⟨psi|U|psi⟩
    for ``part="imag"``.  The same ``rng_seed`` (an integer or tuple
    of integers) reproduces the reading bit for bit.
    """
    _check_entropy(rng_seed)
    branched = apply_unitary(psi, U)
    p_plus = _reading_probability(psi.amplitudes, branched.amplitudes, part)
    return _reading(p_plus, rng_seed)


def _check_error_budget(delta, confidence):
    if isinstance(delta, bool) or not isinstance(delta, (int, float)):
        raise DomainError(f"additive error target must be a number, got {delta!r}")
    if not delta > 0:
        raise DomainError(f"additive error target must be positive, got {delta}")
    if isinstance(confidence, bool) or not isinstance(confidence, (int, float)):
        raise DomainError(f"confidence must be a number, got {confidence!r}")
    if not 0.5 < confidence < 1.0:
        raise DomainError(
            f"confidence must lie strictly between 1/2 and 1, got {confidence}"
        )


def plan_samples(delta: float, confidence: float = 0.75) -> int:
    """Samples per quadrature for additive error ``delta`` at ``confidence``.

    A two-sided Hoeffding bound on ±1 readings, with a union bound
    across the real and imaginary estimators:
    N = ceil(2 ln(4 / (1 - confidence)) / delta^2).  Monotone
    decreasing in ``delta``; both parameter boundaries are errors.
    """
    _check_error_budget(delta, confidence)
    return math.ceil(2.0 * math.log(4.0 / (1.0 - confidence)) / (delta * delta))


@dataclass(frozen=True)
class TraceEstimate:
    """An additive-error estimate of a plat invariant, with audit trail.

    ``value`` approximates the exact invariant to within ``delta`` with
    probability at least ``confidence``.  ``scale`` is the factor by
    which the per-quadrature sampling error was tightened so that the
    guarantee holds on the invariant's own normalization scale;
    ``samples_used`` counts both quadratures together and is at least
    the planner's per-quadrature bound.  ``exact`` carries the
    deterministic value whenever the library could compute it, and
    ``tractable_root`` flags evaluation points where sampling has no
    advantage over classical evaluation.
    """

    value: complex
    delta: float
    confidence: float
    samples_used: int
    seed: int
    r: int
    scale: float
    crossing_steps: int
    generator: str = GENERATOR_ID
    exact: complex | None = None
    tractable_root: bool = False

    def __post_init__(self):
        _check_error_budget(self.delta, self.confidence)
        if self.samples_used < plan_samples(self.delta * self.scale, self.confidence):
            raise DomainError("samples_used fell below the planned bound")

    @property
    def exact_available(self) -> bool:
        return self.exact is not None

    def error_bound_held(self) -> bool | None:
        """Whether |value - exact| ≤ delta, or None without an exact value."""
        if self.exact is None:
            return None
        return abs(self.value - self.exact) <= self.delta

    def to_json_dict(self) -> dict:
        """The documented result schema, JSON-serializable."""
        return {
            "Z_re": self.value.real,
            "Z_im": self.value.imag,
            "delta": self.delta,
            "confidence": self.confidence,
            "samples": self.samples_used,
            "seed": self.seed,
            "r": self.r,
            "exact_available": self.exact is not None,
            "exact_re": None if self.exact is None else self.exact.real,
            "exact_im": None if self.exact is None else self.exact.imag,
            "scale": self.scale,
            "generator": self.generator,
            "crossing_steps": self.crossing_steps,
            "tractable_root": self.tractable_root,
        }


def _check_run_seed(seed):
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise DomainError(f"seed must be a nonnegative integer, got {seed!r}")


def _braided_bend_branch(w: BraidWord, strand: tuple[int, ...], r: int):
    """Stream the word over the top bend state, one crossing per step.

    Returns the bottom bend reference vector, the braided branch
    vector, and the number of controlled crossing applications (always
    the letter count of the word).
    """
    dom = _paths(strand, r)
    state = np.zeros(len(dom), dtype=complex)
    state[dom.index(_standard_path(strand))] = 1.0
    current = strand
    steps = 0
    for generator, sign in w.letters:
        current, step = _elementary_matrix(current, generator, sign, r)
        state = step @ state
        steps += 1
    cod = _paths(current, r)
    reference = np.zeros(len(cod), dtype=complex)
    reference[cod.index(_standard_path(current))] = 1.0
    return reference, state, steps


def _sampled_overlap(reference, branch, planned: int, seed: int) -> complex:
    """Mean of per-quadrature ancilla readings, on derived per-sample seeds.

    Sample k of quadrature p draws from a generator seeded with
    (seed, p, k), so samples are independent, reproducible, and safe to
    evaluate in any order; the ±1 readings are aggregated as exact
    integers, making the reported mean order-independent.
    """
    if planned > SAMPLE_LIMIT:
        raise LimitError(
            f"sample budget {planned} per quadrature exceeds the limit "
            f"{SAMPLE_LIMIT}; loosen delta or confidence"
        )
    means = []
    for part in ("real", "imag"):
        p_plus = _reading_probability(reference, branch, part)
        index = _PART_INDEX[part]
        total = sum(_reading(p_plus, (seed, index, k)) for k in range(planned))
        means.append(total / planned)
    return complex(means[0], means[1])


def estimate_markov_trace(
    w: BraidWord, colors, r: int, delta: float, confidence: float = 0.75, seed: int = 0
) -> TraceEstimate:
    """Sampled estimate of the colored invariant of the plat closure.

    ``colors`` lists one color per link component, as for
    ``colored_invariant``, whose value the estimate targets on the same
    normalization scale.  The simulator prepares the top bend state,
    applies one controlled crossing per letter, and reads the ancilla
    2N times — N per quadrature, with N chosen by the planner at the
    rescaled error ``delta * scale`` so that the final guarantee
    |value − exact| ≤ delta holds with probability ≥ ``confidence``.
    The deterministic exact value rides along for comparison.
    Identical arguments and seed reproduce the estimate bit for bit.
    """
    _check_error_budget(delta, confidence)
    _check_run_seed(seed)
    profile, strand, prefactor = _plat_pieces(w, colors, r)
    reference, branch, steps = _braided_bend_branch(w, strand, r)
    scale = 1.0 / (abs(prefactor) * math.sqrt(2.0))
    planned = plan_samples(delta * scale, confidence)
    overlap = _sampled_overlap(reference, branch, planned, seed)
    return TraceEstimate(
        value=prefactor * overlap,
        delta=delta,
        confidence=confidence,
        samples_used=2 * planned,
        seed=seed,
        r=r,
        scale=scale,
        crossing_steps=steps,
        exact=colored_invariant(w, colors, r),
        tractable_root=r in TRACTABLE_ROOTS,
    )


def approx_jones(
    w: BraidWord, r: int, delta: float, confidence: float = 0.75, seed: int = 0
) -> TraceEstimate:
    """Sampled Jones value of the plat closure, unknot normalized.

    Every component carries spin 1/2 and the reported value sits on
    the scale where the unknot evaluates to exactly 1 — the scale of
    ``jones_value_from_plat``, whose deterministic value rides along as
    the exact companion.  Roots 3, 4, and 6 are accepted but flagged
    ``tractable_root``: there the evaluated invariant is classically
    easy and sampling buys nothing.  Root 2 is rejected outright —
    the spin-1/2 strand degenerates at that point and the braiding
    machinery is empty.
    """
    _check_error_budget(delta, confidence)
    _check_run_seed(seed)
    if r == 2:
        raise DomainError(
            "r = 2 evaluates at the second root of unity, where the spin-1/2 "
            "braiding degenerates ([2]_q = 0); that point is classically "
            "tractable but outside this sampler's domain"
        )
    strand, prefactor = _jones_pieces(w, r)
    reference, branch, steps = _braided_bend_branch(w, strand, r)
    scale = 1.0 / (abs(prefactor) * math.sqrt(2.0))
    planned = plan_samples(delta * scale, confidence)
    overlap = _sampled_overlap(reference, branch, planned, seed)
    return TraceEstimate(
        value=prefactor * overlap,
        delta=delta,
        confidence=confidence,
        samples_used=2 * planned,
        seed=seed,
        r=r,
        scale=scale,
        crossing_steps=steps,
        exact=jones_value_from_plat(w, r),
        tractable_root=r in TRACTABLE_ROOTS,
    )


def _jones_pieces(w: BraidWord, r: int):
    """Strand colors and prefactor on the unknot-normalized Jones scale."""
    count = plat_profile(w).component_count
    profile, strand, prefactor = _plat_pieces(w, (ColorLabel(1),) * count, r)
    framing = _braid_phase(1, 1, 0, r)
    prefactor *= (-1) ** (count - 1) * framing ** (-2 * profile.linking_sum())
    prefactor /= _qdim(1, r)
    return strand, prefactor

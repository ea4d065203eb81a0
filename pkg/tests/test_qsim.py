"""Tests for the sampled estimation of plat invariants."""

import math
from fractions import Fraction

import numpy as np
import pytest

from knit.braid import BraidWord, parse_braid
from knit.diagram import closure_plat
from knit.errors import DomainError, LimitError
from knit.jones import jones_polynomial
from knit.laurent import evaluate_at_root
from knit.qsim import (
    GENERATOR_ID,
    StateVector,
    TraceEstimate,
    apply_unitary,
    approx_jones,
    bend_state,
    estimate_markov_trace,
    hadamard_test_sample,
    plan_samples,
)
from knit.su2q import (
    ColoredSpace,
    braiding_operator_for_plat,
    braiding_operator_for_word,
    colored_invariant,
    jones_value_from_plat,
    q_integer,
    r_matrix,
)

HALF = Fraction(1, 2)

# Three-component plat word in B_6 whose closure is the Borromean rings.
BORROMEAN_PLAT = "s2 s1 s4^-1 s3 s4^-1 s3 s2^-1 s4^-1"

TREFOIL_PLAT = parse_braid("s2^3", 4)
IDENTITY_B2 = BraidWord(2, ())


def random_unitary(dim, seed):
    rng = np.random.default_rng(seed)
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, upper = np.linalg.qr(raw)
    return q * (np.diagonal(upper) / np.abs(np.diagonal(upper)))


def random_state(dim, seed):
    rng = np.random.default_rng(seed)
    raw = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return StateVector(raw / np.linalg.norm(raw))


class TestStateVector:
    def test_accepts_normalized_vector(self):
        psi = StateVector(np.array([0.6, 0.8j]))
        assert psi.dimension == 2
        assert psi.norm() == pytest.approx(1.0)

    def test_rejects_unnormalized_vector(self):
        with pytest.raises(DomainError):
            StateVector(np.array([1.0, 1.0]))

    def test_rejects_empty_and_non_vector(self):
        with pytest.raises(DomainError):
            StateVector(np.array([], dtype=complex))
        with pytest.raises(DomainError):
            StateVector(np.eye(2))

    def test_norm_tolerance_is_tight(self):
        StateVector(np.array([1.0 + 0.5e-10, 0.0]))
        with pytest.raises(DomainError):
            StateVector(np.array([1.0 + 1.0e-9, 0.0]))

    def test_basis_state(self):
        psi = StateVector.basis(4, 2)
        assert psi.amplitudes[2] == 1.0
        assert np.count_nonzero(psi.amplitudes) == 1
        with pytest.raises(DomainError):
            StateVector.basis(4, 4)

    def test_space_dimension_must_match(self):
        space = ColoredSpace((HALF, HALF), 5)
        StateVector(np.array([1.0, 0.0]), space)
        with pytest.raises(DomainError):
            StateVector(np.array([1.0, 0.0, 0.0]), space)

    def test_amplitudes_are_frozen(self):
        psi = StateVector.basis(3, 0)
        with pytest.raises(ValueError):
            psi.amplitudes[0] = 0.0

    def test_bend_state_is_the_pairing_basis_state(self):
        space = ColoredSpace((HALF, HALF), 5)
        psi = bend_state(space)
        assert psi.space == space
        assert psi.amplitudes[space.paths().index((0, 1, 0))] == 1.0

    def test_bend_state_needs_paired_colors(self):
        with pytest.raises(DomainError):
            bend_state(ColoredSpace((HALF, Fraction(3, 2)), 7))


class TestApplyUnitary:
    def test_identity_is_noop(self):
        psi = random_state(8, 1)
        out = apply_unitary(psi, np.eye(8))
        assert np.array_equal(out.amplitudes, psi.amplitudes)

    def test_inverse_restores_state(self):
        psi = random_state(6, 2)
        U = random_unitary(6, 3)
        back = apply_unitary(apply_unitary(psi, U), U.conj().T)
        assert np.abs(back.amplitudes - psi.amplitudes).max() < 1e-10

    def test_r_matrix_preserves_norm(self):
        R = r_matrix(HALF, HALF, 5)
        psi = bend_state(R.domain)
        out = apply_unitary(psi, R)
        assert abs(out.norm() - 1.0) < 1e-10
        assert out.space == R.codomain

    def test_braiding_operator_inverse_roundtrip(self):
        R = r_matrix(HALF, 1, 7)
        psi = random_state(R.matrix.shape[1], 4)
        back = apply_unitary(apply_unitary(psi, R), R.inverse())
        assert np.abs(back.amplitudes - psi.amplitudes).max() < 1e-10

    def test_targeted_single_factor_matches_kronecker(self):
        psi = random_state(8, 5)
        U = random_unitary(2, 6)
        out = apply_unitary(psi, U, targets=(1,))
        full = np.kron(np.kron(np.eye(2), U), np.eye(2))
        assert np.abs(out.amplitudes - full @ psi.amplitudes).max() < 1e-12

    def test_targeted_pair_respects_order(self):
        psi = random_state(8, 7)
        U = random_unitary(4, 8)
        out = apply_unitary(psi, U, targets=(2, 0))
        full = np.zeros((8, 8), dtype=complex)
        for a in range(2):
            for b in range(2):
                for c in range(2):
                    for ap in range(2):
                        for cp in range(2):
                            # targets (2, 0): factor 2 is the high bit of U's index
                            full[4 * ap + 2 * b + cp, 4 * a + 2 * b + c] += U[
                                2 * cp + ap, 2 * c + a
                            ]
        assert np.abs(out.amplitudes - full @ psi.amplitudes).max() < 1e-12

    def test_rejects_non_unitary(self):
        psi = random_state(4, 9)
        with pytest.raises(DomainError):
            apply_unitary(psi, np.diag([1.0, 1.0, 1.0, 0.5]))

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(DomainError):
            apply_unitary(random_state(4, 10), np.eye(8))
        with pytest.raises(DomainError):
            apply_unitary(random_state(6, 11), np.eye(2), targets=(0,))

    def test_rejects_bad_targets(self):
        psi = random_state(8, 12)
        with pytest.raises(DomainError):
            apply_unitary(psi, np.eye(2), targets=(3,))
        with pytest.raises(DomainError):
            apply_unitary(psi, np.eye(4), targets=(1, 1))
        with pytest.raises(DomainError):
            apply_unitary(psi, np.eye(4), targets=(0,))

    def test_braiding_operator_takes_no_targets(self):
        R = r_matrix(HALF, HALF, 5)
        with pytest.raises(DomainError):
            apply_unitary(bend_state(R.domain), R, targets=(0,))

    def test_norm_preserved_through_thirty_crossing_circuit(self):
        rng = np.random.default_rng(13)
        n, r = 4, 7
        psi = bend_state(ColoredSpace((HALF,) * n, r))
        colors = (HALF,) * n
        for _ in range(30):
            gen = int(rng.integers(1, n))
            sign = int(rng.choice((-1, 1)))
            step = BraidWord(n, ((gen, sign),))
            op = braiding_operator_for_word(step, colors, r)
            psi = apply_unitary(psi, op)
            colors = tuple(op.codomain.factors[i].j for i in range(n))
        assert abs(psi.norm() - 1.0) < 1e-8


class TestHadamardTestSample:
    def test_identity_always_plus_one(self):
        psi = random_state(4, 20)
        assert all(
            hadamard_test_sample(np.eye(4), psi, "real", (20, k)) == 1
            for k in range(50)
        )

    def test_minus_identity_always_minus_one(self):
        psi = random_state(4, 21)
        assert all(
            hadamard_test_sample(-np.eye(4), psi, "real", (21, k)) == -1
            for k in range(50)
        )

    def test_i_identity_real_part_is_a_fair_coin(self):
        psi = random_state(3, 22)
        samples = [
            hadamard_test_sample(1j * np.eye(3), psi, "real", (22, k))
            for k in range(10_000)
        ]
        assert abs(sum(samples) / len(samples)) < 0.05

    def test_i_identity_imag_part_always_plus_one(self):
        psi = random_state(3, 23)
        assert all(
            hadamard_test_sample(1j * np.eye(3), psi, "imag", (23, k)) == 1
            for k in range(50)
        )

    @pytest.mark.parametrize("part", ["real", "imag"])
    def test_unbiased_against_direct_matrix_element(self, part):
        dim, count = 5, 10_000
        U = random_unitary(dim, 24)
        psi = random_state(dim, 25)
        overlap = complex(np.vdot(psi.amplitudes, U @ psi.amplitudes))
        expected = overlap.real if part == "real" else overlap.imag
        samples = [
            hadamard_test_sample(U, psi, part, (26, k)) for k in range(count)
        ]
        assert abs(sum(samples) / count - expected) < 5 / math.sqrt(count)

    def test_deterministic_per_seed(self):
        U = random_unitary(4, 27)
        psi = random_state(4, 28)
        a = [hadamard_test_sample(U, psi, "real", (29, k)) for k in range(100)]
        b = [hadamard_test_sample(U, psi, "real", (29, k)) for k in range(100)]
        assert a == b

    def test_accepts_braiding_operator(self):
        R = r_matrix(HALF, HALF, 5)
        psi = bend_state(R.domain)
        assert hadamard_test_sample(R, psi, "real", 30) in (-1, 1)

    def test_rejects_bad_part_and_seed(self):
        psi = random_state(2, 31)
        with pytest.raises(DomainError):
            hadamard_test_sample(np.eye(2), psi, "abs", 0)
        with pytest.raises(DomainError):
            hadamard_test_sample(np.eye(2), psi, "real", -1)
        with pytest.raises(DomainError):
            hadamard_test_sample(np.eye(2), psi, "real", (0, 2.5))


class TestPlanSamples:
    def test_unit_error_at_default_confidence(self):
        assert plan_samples(1, 0.75) == 6
        assert plan_samples(1.0) == 6

    def test_halving_delta_quadruples_within_ceiling(self):
        coarse = plan_samples(0.1, 0.75)
        fine = plan_samples(0.05, 0.75)
        assert 4 * coarse - 4 <= fine <= 4 * coarse

    def test_monotone_decreasing_in_delta(self):
        plans = [plan_samples(d, 0.8) for d in (0.02, 0.05, 0.1, 0.5, 1.0)]
        assert plans == sorted(plans, reverse=True)

    def test_grows_as_confidence_rises(self):
        assert plan_samples(0.1, 0.99) > plan_samples(0.1, 0.75)

    @pytest.mark.parametrize("delta", [0, -0.5, 0.0])
    def test_rejects_nonpositive_delta(self, delta):
        with pytest.raises(DomainError):
            plan_samples(delta, 0.75)

    @pytest.mark.parametrize("confidence", [0.5, 1.0, 0.0, 1.5, -1.0])
    def test_rejects_confidence_outside_open_interval(self, confidence):
        with pytest.raises(DomainError):
            plan_samples(0.1, confidence)


class TestEstimateMarkovTrace:
    def test_identity_word_lands_on_quantum_dimension(self):
        est = estimate_markov_trace(IDENTITY_B2, [HALF], 5, 0.05, seed=1)
        assert abs(est.value - q_integer(2, 5)) <= 0.05
        assert est.exact == pytest.approx(q_integer(2, 5))
        assert est.crossing_steps == 0

    def test_trefoil_hits_exact_on_most_seeds(self):
        exact = colored_invariant(TREFOIL_PLAT, [HALF], 5)
        hits = 0
        for seed in range(40):
            est = estimate_markov_trace(TREFOIL_PLAT, [HALF], 5, 0.1, seed=seed)
            assert est.exact == pytest.approx(exact)
            hits += abs(est.value - exact) <= 0.1
        assert hits >= 30

    def test_zero_delta_is_rejected(self):
        with pytest.raises(DomainError):
            estimate_markov_trace(TREFOIL_PLAT, [HALF], 5, 0.0, seed=0)

    def test_bad_confidence_and_seed_are_rejected(self):
        with pytest.raises(DomainError):
            estimate_markov_trace(TREFOIL_PLAT, [HALF], 5, 0.1, confidence=1.0)
        with pytest.raises(DomainError):
            estimate_markov_trace(TREFOIL_PLAT, [HALF], 5, 0.1, seed=-3)
        with pytest.raises(DomainError):
            estimate_markov_trace(TREFOIL_PLAT, [HALF], 5, 0.1, seed=1.5)

    def test_crossing_steps_equal_word_length(self):
        for word in ["s1", "s2 s2", BORROMEAN_PLAT]:
            w = parse_braid(word, 6)
            est = estimate_markov_trace(w, [HALF] * plat_components(w), 7, 0.5, seed=2)
            assert est.crossing_steps == len(w.letters)

    def test_samples_match_planner_at_rescaled_error(self):
        est = estimate_markov_trace(TREFOIL_PLAT, [HALF], 5, 0.1, seed=4)
        assert est.samples_used == 2 * plan_samples(0.1 * est.scale, est.confidence)

    def test_scale_reflects_contraction_prefactor(self):
        est = estimate_markov_trace(IDENTITY_B2, [HALF], 5, 0.05, seed=5)
        prefactor = abs(q_integer(2, 5))
        assert est.scale == pytest.approx(1.0 / (prefactor * math.sqrt(2.0)))

    def test_distinct_colors_move_the_reference_space(self):
        w = parse_braid(BORROMEAN_PLAT, 6)
        colors = [HALF, 1, Fraction(3, 2)]
        exact = colored_invariant(w, colors, 10)
        est = estimate_markov_trace(w, colors, 10, 0.5, seed=6)
        assert est.exact == pytest.approx(exact)
        assert abs(est.value - exact) <= 0.5

    def test_bitwise_deterministic(self):
        a = estimate_markov_trace(TREFOIL_PLAT, [HALF], 5, 0.1, seed=7)
        b = estimate_markov_trace(TREFOIL_PLAT, [HALF], 5, 0.1, seed=7)
        assert a.value == b.value
        assert a.to_json_dict() == b.to_json_dict()

    def test_different_seeds_give_different_readings(self):
        a = estimate_markov_trace(TREFOIL_PLAT, [HALF], 5, 0.1, seed=8)
        b = estimate_markov_trace(TREFOIL_PLAT, [HALF], 5, 0.1, seed=9)
        assert a.value != b.value

    def test_matches_public_sampling_primitive(self):
        seed, delta = 9, 0.3
        est = estimate_markov_trace(TREFOIL_PLAT, [HALF], 5, delta, seed=seed)
        op = braiding_operator_for_plat(TREFOIL_PLAT, [HALF] * 4, 5)
        psi = bend_state(op.domain)
        branch = apply_unitary(psi, op)
        overlap = complex(np.vdot(psi.amplitudes, branch.amplitudes))
        prefactor = est.exact / overlap
        planned = est.samples_used // 2
        means = []
        for index, part in enumerate(("real", "imag")):
            readings = [
                hadamard_test_sample(op, psi, part, (seed, index, k))
                for k in range(planned)
            ]
            means.append(sum(readings) / planned)
        rebuilt = prefactor * complex(means[0], means[1])
        assert est.value == pytest.approx(rebuilt, abs=1e-9)

    def test_propagates_closure_errors(self):
        with pytest.raises(DomainError):
            estimate_markov_trace(parse_braid("s1", 3), [HALF], 5, 0.1)
        with pytest.raises(DomainError):
            estimate_markov_trace(TREFOIL_PLAT, [HALF, HALF], 5, 0.1)

    def test_tiny_delta_trips_the_sample_limit(self):
        with pytest.raises(LimitError):
            estimate_markov_trace(TREFOIL_PLAT, [HALF], 5, 1e-4, seed=0)

    def test_json_schema_keys(self):
        est = estimate_markov_trace(TREFOIL_PLAT, [HALF], 5, 0.2, seed=10)
        payload = est.to_json_dict()
        for key in (
            "Z_re",
            "Z_im",
            "delta",
            "confidence",
            "samples",
            "seed",
            "r",
            "exact_available",
            "exact_re",
            "exact_im",
            "scale",
            "generator",
            "crossing_steps",
        ):
            assert key in payload
        assert payload["exact_available"] is True
        assert payload["generator"] == GENERATOR_ID
        assert payload["samples"] == est.samples_used

    def test_error_bound_flag(self):
        est = estimate_markov_trace(TREFOIL_PLAT, [HALF], 5, 0.1, seed=3)
        assert est.error_bound_held() is True


def plat_components(w):
    from knit.diagram import plat_profile

    return plat_profile(w).component_count


class TestApproxJones:
    def test_unknot_normalizes_to_one(self):
        est = approx_jones(IDENTITY_B2, 5, 0.1, seed=1)
        assert abs(est.value - 1.0) <= 0.1
        assert est.exact == pytest.approx(1.0)

    def test_kinked_unknot_still_one(self):
        est = approx_jones(parse_braid("s1", 2), 7, 0.1, seed=2)
        assert abs(est.value - 1.0) <= 0.1
        assert est.exact == pytest.approx(1.0)

    def test_trefoil_matches_polynomial_oracle(self):
        root = 5
        poly = jones_polynomial(closure_plat(TREFOIL_PLAT))
        oracle = evaluate_at_root(poly, root)
        est = approx_jones(TREFOIL_PLAT, root, 0.1, seed=3)
        assert est.exact == pytest.approx(oracle, abs=1e-12)
        assert abs(est.value - oracle) <= 0.1

    def test_most_seeds_hit_within_delta(self):
        exact = jones_value_from_plat(TREFOIL_PLAT, 5)
        hits = sum(
            abs(approx_jones(TREFOIL_PLAT, 5, 0.1, seed=s).value - exact) <= 0.1
            for s in range(10)
        )
        assert hits >= 7

    @pytest.mark.parametrize("root", [3, 4, 6])
    def test_tractable_roots_are_flagged(self, root):
        est = approx_jones(IDENTITY_B2, root, 0.3, seed=4)
        assert est.tractable_root is True
        assert est.to_json_dict()["tractable_root"] is True

    def test_generic_root_is_not_flagged(self):
        assert approx_jones(IDENTITY_B2, 5, 0.3, seed=5).tractable_root is False

    def test_second_root_is_rejected(self):
        with pytest.raises(DomainError):
            approx_jones(TREFOIL_PLAT, 2, 0.1)

    def test_deterministic_per_seed(self):
        a = approx_jones(TREFOIL_PLAT, 5, 0.1, seed=6)
        b = approx_jones(TREFOIL_PLAT, 5, 0.1, seed=6)
        assert a.value == b.value and a.to_json_dict() == b.to_json_dict()

    def test_borromean_rings_estimate(self):
        w = parse_braid(BORROMEAN_PLAT, 6)
        exact = jones_value_from_plat(w, 7)
        est = approx_jones(w, 7, 0.4, seed=7)
        assert est.exact == pytest.approx(exact)
        assert abs(est.value - exact) <= 0.4
        assert est.crossing_steps == 8


class TestTraceEstimateInvariants:
    def test_samples_cannot_undercut_planner(self):
        with pytest.raises(DomainError):
            TraceEstimate(
                value=0j,
                delta=0.1,
                confidence=0.75,
                samples_used=3,
                seed=0,
                r=5,
                scale=1.0,
                crossing_steps=0,
            )

    def test_confidence_bounds_enforced(self):
        with pytest.raises(DomainError):
            TraceEstimate(
                value=0j,
                delta=0.5,
                confidence=0.5,
                samples_used=100,
                seed=0,
                r=5,
                scale=1.0,
                crossing_steps=0,
            )

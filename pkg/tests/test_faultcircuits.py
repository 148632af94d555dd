import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_qubit
from gatecomplexity.faultcircuits import (
    is_locally_correctable,
    outcome_correction,
    run_fig2,
    run_fig3,
    teleport_once,
)
from gatecomplexity.gates import pauli_z, stuck_hadamard
from gatecomplexity.infocomplexity import purity
from gatecomplexity.qcore import (
    DensityMatrix,
    StateVector,
    apply_gate,
    equal_up_to_global_phase,
    partial_trace,
    schmidt_rank,
    to_density,
)

SQ2 = 1 / math.sqrt(2)
angles = st.floats(-2 * math.pi, 2 * math.pi)


def ket(*bits):
    """Basis vector for the given bits, qubit 0 first."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int("".join(map(str, bits)), 2)] = 1
    return v


def premeasure_closed_form(alpha, beta, theta):
    """(1/sqrt2)|0>(|0>+|1>)(a c|0> + b s|1>) + (1/sqrt2)|1>(|0>+|1>)(a s|0> - b c|1>)."""
    c, s = math.cos(theta), math.sin(theta)
    out = np.zeros(8, dtype=complex)
    for y in (0, 1):
        out += SQ2 * (alpha * c * ket(0, y, 0) + beta * s * ket(0, y, 1))
        out += SQ2 * (alpha * s * ket(1, y, 0) - beta * c * ket(1, y, 1))
    return out


class TestFig2:
    def test_no_fault_at_45(self):
        r = run_fig2(math.pi / 4)
        assert equal_up_to_global_phase(r.upper_state, StateVector([1, -1]))

    def test_thirty_degrees(self):
        r = run_fig2(math.radians(30))
        np.testing.assert_allclose(r.upper_state.amplitudes, [0.8660254037844387, -0.5], atol=1e-12)
        np.testing.assert_allclose(r.upper_state.amplitudes, [0.86603, -0.5], atol=1e-5)

    def test_joint_state_matches_product_form(self, rng):
        for t in rng.uniform(-math.pi, math.pi, 50):
            expected = np.kron([math.cos(t), -math.sin(t)], [1, -1]) / math.sqrt(2)
            np.testing.assert_allclose(run_fig2(t).joint_state.amplitudes, expected, atol=1e-12)

    def test_z_then_stuck_gate_yields_zero(self):
        t = math.radians(30)
        upper = run_fig2(t).upper_state
        out = apply_gate(apply_gate(upper, pauli_z(), [0]), stuck_hadamard(t), [0])
        np.testing.assert_allclose(out.amplitudes, [1, 0], atol=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(angles)
    def test_product_state_and_repair(self, t):
        r = run_fig2(t)
        assert schmidt_rank(r.joint_state, 1) == 1
        assert equal_up_to_global_phase(r.corrected_upper, StateVector([1, -1]), 1e-12)

    def test_lower_wire_untouched(self):
        r = run_fig2(0.2)
        lower = partial_trace(to_density(r.joint_state), [1])
        np.testing.assert_allclose(lower.entries, 0.5 * np.array([[1, -1], [-1, 1]]), atol=1e-12)


class TestFig3:
    def test_joint_state_thirty_degrees(self):
        t = math.radians(30)
        s, c = math.sin(t), math.cos(t)
        # (1/sqrt2)(s|00> - c|01> + s|11> - c|10>)
        expected = SQ2 * (s * ket(0, 0) - c * ket(0, 1) + s * ket(1, 1) - c * ket(1, 0))
        np.testing.assert_allclose(run_fig3(t).joint_state.amplitudes, expected, atol=1e-12)

    def test_rho_ab_matrix(self):
        t = 0.7
        s, c = math.sin(t), math.cos(t)
        expected = 0.5 * np.array([
            [s * s, -s * c, -s * c, s * s],
            [-s * c, c * c, c * c, -s * c],
            [-s * c, c * c, c * c, -s * c],
            [s * s, -s * c, -s * c, s * s],
        ])
        np.testing.assert_allclose(run_fig3(t).rho_ab.entries, expected, atol=1e-12)

    def test_fault_free_boundary(self):
        r = run_fig3(math.pi / 4)
        assert r.locally_correctable
        assert purity(r.rho_a) == pytest.approx(1, abs=1e-12)

    def test_thirty_degrees_not_correctable(self):
        r = run_fig3(math.radians(30))
        assert not r.locally_correctable
        assert purity(r.rho_a) == pytest.approx(0.875, abs=1e-12)

    def test_reduced_state_over_grid(self):
        for deg in range(0, 361):
            t = math.radians(deg)
            s2 = math.sin(2 * t)
            r = run_fig3(t)
            np.testing.assert_allclose(r.rho_a.entries, 0.5 * np.array([[1, -s2], [-s2, 1]]), atol=1e-12)
            assert r.locally_correctable == (deg % 90 == 45), deg
            assert schmidt_rank(r.joint_state, 1) == (1 if deg % 90 == 45 else 2)


class TestLocalCorrectability:
    def test_pure(self):
        assert is_locally_correctable(to_density(StateVector.basis("0")))

    def test_maximally_mixed(self):
        assert not is_locally_correctable(DensityMatrix(np.eye(2) / 2))

    def test_sixty_degrees(self):
        s2 = math.sin(math.radians(120))
        rho = DensityMatrix(0.5 * np.array([[1, -s2], [-s2, 1]]))
        assert purity(rho) == pytest.approx(0.875, abs=1e-12)
        assert not is_locally_correctable(rho)

    def test_wrong_dimension(self):
        with pytest.raises(ValueError):
            is_locally_correctable(DensityMatrix(np.eye(4) / 4))

    def test_unitaries_cannot_purify(self, rng):
        # the reason a mixed reduced state is uncorrectable: purity is unitarily invariant
        rho = run_fig3(math.radians(30)).rho_a.entries
        for _ in range(50):
            q, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
            assert purity(DensityMatrix(q @ rho @ q.conj().T)) == pytest.approx(0.875, abs=1e-12)


class TestTeleport:
    def test_premeasure_matches_closed_form(self, rng):
        for _ in range(50):
            alpha, beta = random_qubit(rng)
            t = rng.uniform(-math.pi, math.pi)
            r = teleport_once(alpha, beta, t)
            np.testing.assert_allclose(r.premeasure_state.amplitudes, premeasure_closed_form(alpha, beta, t), atol=1e-12)

    def test_branch_probabilities(self, rng):
        for _ in range(50):
            alpha, beta = random_qubit(rng)
            t = rng.uniform(-math.pi, math.pi)
            b0, b1 = teleport_once(alpha, beta, t).branches
            p0 = abs(alpha) ** 2 * math.cos(t) ** 2 + abs(beta) ** 2 * math.sin(t) ** 2
            assert b0.probability == pytest.approx(p0, abs=1e-12)
            assert b1.probability == pytest.approx(1 - p0, abs=1e-12)

    def test_receiver_states(self, rng):
        alpha, beta = random_qubit(rng)
        t = 0.4
        c, s = math.cos(t), math.sin(t)
        r = teleport_once(alpha, beta, t)
        assert equal_up_to_global_phase(r.x_plus, StateVector([alpha * c, beta * s]))
        assert equal_up_to_global_phase(r.x_minus, StateVector([alpha * s, -beta * c]))
        # with real positive ancilla amplitudes the phase is exactly the written one
        np.testing.assert_allclose(r.x_plus.amplitudes, StateVector([alpha * c, beta * s]).amplitudes, atol=1e-12)

    def test_thirty_degrees_probability(self):
        r = teleport_once(math.sqrt(0.3), math.sqrt(0.7), math.radians(30))
        assert r.branches[0].probability == pytest.approx(0.40, abs=1e-12)

    def test_exact_recovery_at_45(self, rng):
        for _ in range(20):
            alpha, beta = random_qubit(rng)
            r = teleport_once(alpha, beta, math.pi / 4)
            target = StateVector.qubit(alpha, beta)
            assert equal_up_to_global_phase(r.x_plus, target)
            assert not equal_up_to_global_phase(r.x_minus, target) or abs(alpha * beta) < 1e-9
            assert equal_up_to_global_phase(outcome_correction(1, r.x_minus), target)

    def test_collapse_at_zero(self):
        r = teleport_once(0.6, 0.8, 0.0)
        assert equal_up_to_global_phase(r.x_plus, StateVector.basis("0"))
        assert equal_up_to_global_phase(r.x_minus, StateVector.basis("1"))

    def test_zero_probability_branch(self):
        r = teleport_once(1.0, 0.0, 0.0)
        assert r.branches[1].probability == 0 and r.x_minus is None

    def test_unnormalized_input(self):
        with pytest.raises(ValueError):
            teleport_once(1.0, 1.0, 0.3)

    def test_ideal_gate_gives_even_split(self):
        # CNOTs then the ideal Hadamard reproduce standard one-bit teleportation
        alpha, beta = 0.6, 0.8j
        r = teleport_once(alpha, beta, math.pi / 4)
        assert r.branches[0].probability == pytest.approx(0.5, abs=1e-12)

    def test_correction_guard(self):
        with pytest.raises(ValueError):
            outcome_correction(2, StateVector.basis("0"))


def test_fault_free_reference():
    # with both Hadamards ideal the CNOT kicks the phase back onto the upper wire
    expected = np.kron([1, -1], [1, -1]) / 2
    for r in (run_fig2(math.pi / 4), run_fig3(math.pi / 4)):
        np.testing.assert_allclose(r.joint_state.amplitudes, expected, atol=1e-12)

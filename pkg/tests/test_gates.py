import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gatecomplexity.gates import GateMatrix, cnot, hadamard, is_unitary, pauli_z, stuck_hadamard
from gatecomplexity.qcore import StateVector, apply_gate

thetas = st.floats(-50, 50, allow_nan=False)


def test_stuck_hadamard_at_45_degrees_is_hadamard():
    np.testing.assert_allclose(stuck_hadamard(math.pi / 4).matrix,
                               np.array([[1, 1], [1, -1]]) / math.sqrt(2), atol=1e-15)


def test_stuck_hadamard_at_zero_is_pauli_z():
    np.testing.assert_array_equal(stuck_hadamard(0.0).matrix, [[1, 0], [0, -1]])
    np.testing.assert_array_equal(stuck_hadamard(0.0).matrix, pauli_z().matrix)


def test_stuck_hadamard_entries():
    t = 0.3
    np.testing.assert_array_equal(stuck_hadamard(t).matrix,
                                  [[math.cos(t), math.sin(t)], [math.sin(t), -math.cos(t)]])


def test_stuck_hadamard_rejects_nonfinite():
    with pytest.raises(ValueError):
        stuck_hadamard(float("inf"))


@given(thetas)
def test_stuck_hadamard_is_involutive_reflection(theta):
    m = stuck_hadamard(theta).matrix
    np.testing.assert_allclose(m @ m, np.eye(2), atol=1e-12)
    assert np.linalg.det(m).real == pytest.approx(-1, abs=1e-12)
    assert is_unitary(stuck_hadamard(theta))


def test_stuck_hadamard_involution_random(rng):
    for theta in rng.uniform(-10, 10, 100):
        m = stuck_hadamard(theta).matrix
        assert np.max(np.abs(m @ m - np.eye(2))) <= 1e-12


@given(st.floats(-0.5, 0.5))
def test_continuity_near_hadamard(delta):
    err = np.max(np.abs(stuck_hadamard(math.pi / 4 + delta).matrix - hadamard().matrix))
    assert err <= abs(delta) + delta**2 / 2 + 1e-15


def test_cnot_matches_permutation():
    expected = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    np.testing.assert_array_equal(cnot().matrix, expected)
    np.testing.assert_array_equal(cnot().matrix @ cnot().matrix, np.eye(4))


def test_cnot_on_11():
    out = apply_gate(StateVector.basis("11"), cnot(), [0, 1])
    np.testing.assert_array_equal(out.amplitudes, StateVector.basis("10").amplitudes)


def test_hadamard_is_stuck_hadamard_at_pi_over_4():
    np.testing.assert_array_equal(hadamard().matrix, stuck_hadamard(math.pi / 4).matrix)
    out = apply_gate(StateVector.basis("0"), hadamard(), [0])
    np.testing.assert_allclose(out.amplitudes, [1 / math.sqrt(2)] * 2, atol=1e-15)
    assert is_unitary(hadamard(), 1e-15)


def test_pauli_z_repairs_sign():
    t = 0.4
    out = apply_gate(StateVector([math.cos(t), -math.sin(t)]), pauli_z(), [0])
    np.testing.assert_allclose(out.amplitudes, [math.cos(t), math.sin(t)], atol=1e-15)
    np.testing.assert_array_equal(pauli_z().matrix @ pauli_z().matrix, np.eye(2))


@pytest.mark.parametrize("gate", [cnot(), hadamard(), pauli_z(), stuck_hadamard(1.1)])
def test_constructors_are_unitary(gate):
    assert is_unitary(gate, 1e-10)


def test_subunitary_is_rejected():
    assert not is_unitary(np.diag([1, 0.999]), 1e-10)


def test_gate_matrix_shape_guard():
    with pytest.raises(ValueError):
        GateMatrix(np.eye(3))


def test_gate_matrix_is_immutable():
    with pytest.raises(ValueError):
        cnot().matrix[0, 0] = 2

"""Two-qubit and teleportation circuits with a stuck Hadamard injected.

The two-qubit circuits prepare the upper wire in ``|0>`` and the lower wire in
``|1>``, put a Hadamard on each, and finish with a CNOT from upper to lower.
One of the two Hadamards is replaced by ``Hs(theta)``:

* stuck gate on the upper wire: the output stays a product state and the
  upper qubit can be repaired locally;
* stuck gate on the lower wire: the output is entangled, the reduced state of
  the upper qubit is mixed, and no single-qubit unitary can repair it.

The teleportation circuit is the one-classical-bit variant on registers
``X, Y, Z`` (qubits 0, 1, 2) with ``Y, Z`` sharing a Bell pair.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gates import cnot, hadamard, pauli_z, stuck_hadamard
from .infocomplexity import purity
from .qcore import (
    DensityMatrix,
    MeasurementBranch,
    StateVector,
    apply_gate,
    extract_qubit,
    measure_qubit,
    partial_trace,
    tensor,
    to_density,
)

CORRECTABLE_TOL = 1e-9
UPPER, LOWER = 0, 1
X, Y, Z = 0, 1, 2


@dataclass(frozen=True)
class Fig2Result:
    joint_state: StateVector
    upper_state: StateVector
    corrected_upper: StateVector


@dataclass(frozen=True)
class Fig3Result:
    joint_state: StateVector
    rho_ab: DensityMatrix
    rho_a: DensityMatrix
    locally_correctable: bool


@dataclass(frozen=True)
class TeleportResult:
    premeasure_state: StateVector
    branches: tuple[MeasurementBranch, MeasurementBranch]
    x_plus: StateVector | None
    x_minus: StateVector | None

    @property
    def outputs(self) -> tuple[StateVector | None, StateVector | None]:
        return self.x_plus, self.x_minus


def _two_qubit_run(upper_gate, lower_gate) -> StateVector:
    upper = apply_gate(StateVector.basis("0"), upper_gate, [0])
    lower = apply_gate(StateVector.basis("1"), lower_gate, [0])
    return apply_gate(tensor(upper, lower), cnot(), [UPPER, LOWER])


def repair_upper(upper_state: StateVector, theta: float) -> StateVector:
    """Undo the upper-wire fault: ``Z``, ``Hs(theta)``, then ``H`` and ``Z``.

    The first two gates take ``cos t|0> - sin t|1>`` to ``|0>``; the last two
    prepare the fault-free ``(|0> - |1>)/sqrt 2``.
    """
    state = upper_state
    for gate in (pauli_z(), stuck_hadamard(theta), hadamard(), pauli_z()):
        state = apply_gate(state, gate, [0])
    return state


def run_fig2(theta: float) -> Fig2Result:
    """Stuck ``Hs(theta)`` on the upper wire ahead of the CNOT."""
    joint = _two_qubit_run(stuck_hadamard(theta), hadamard())
    upper = extract_qubit(joint, UPPER)
    return Fig2Result(joint, upper, repair_upper(upper, theta))


def is_locally_correctable(rho_reduced: DensityMatrix, tol: float = CORRECTABLE_TOL) -> bool:
    """Whether a single-qubit reduced state is pure enough to be rotated back.

    A unitary preserves purity, so a mixed reduced state can never be mapped to
    the pure fault-free factor by acting on that qubit alone.
    """
    if rho_reduced.dim != 2:
        raise ValueError(f"expected a single-qubit density matrix, got dim {rho_reduced.dim}")
    return purity(rho_reduced) >= 1 - tol


def run_fig3(theta: float) -> Fig3Result:
    """Stuck ``Hs(theta)`` on the lower wire ahead of the CNOT."""
    joint = _two_qubit_run(hadamard(), stuck_hadamard(theta))
    rho_ab = to_density(joint)
    rho_a = partial_trace(rho_ab, [UPPER])
    return Fig3Result(joint, rho_ab, rho_a, is_locally_correctable(rho_a))


def bell_pair() -> StateVector:
    return StateVector(np.array([1, 0, 0, 1]))


def _check_amplitudes(alpha: complex, beta: complex) -> None:
    for v in (alpha, beta):
        if not (math.isfinite(complex(v).real) and math.isfinite(complex(v).imag)):
            raise ValueError("amplitudes must be finite")
    total = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(total - 1) > 1e-10:
        raise ValueError(f"|alpha|^2 + |beta|^2 = {total}, expected 1")


def teleport_once(alpha: complex, beta: complex, theta: float) -> TeleportResult:
    """One run of the one-bit teleportation circuit with ``Hs(theta)`` on ``X``.

    Steps: CNOT X->Y, CNOT Y->Z, ``Hs(theta)`` on X, measure X.  The receiver's
    qubit Z is left in ``x_plus`` (outcome 0) or ``x_minus`` (outcome 1),
    uncorrected; either is ``None`` when its branch has zero probability.
    """
    _check_amplitudes(alpha, beta)
    state = tensor(StateVector.qubit(alpha, beta), bell_pair())
    state = apply_gate(state, cnot(), [X, Y])
    state = apply_gate(state, cnot(), [Y, Z])
    state = apply_gate(state, stuck_hadamard(theta), [X])
    branches = measure_qubit(state, X)
    outputs = [extract_qubit(b.post_state, Z) if b.defined else None for b in branches]
    return TeleportResult(state, branches, outputs[0], outputs[1])


def outcome_correction(outcome: int, state: StateVector) -> StateVector:
    """Receiver's fix-up for one pass: ``Z`` after outcome 1, nothing after 0.

    At ``theta = pi/4`` this completes the teleportation; for other angles the
    iterative procedure in :mod:`gatecomplexity.recovery` is needed.
    """
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome}")
    return apply_gate(state, pauli_z(), [0]) if outcome else state

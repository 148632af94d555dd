"""Dense state-vector and density-matrix engine for a handful of qubits.

Qubit 0 is the leftmost symbol of a ket and the most significant bit of the
amplitude index, so ``|01>`` is index 1 and ``|100>`` is index 4.

All values are immutable: the wrapped arrays are marked read-only and every
operation returns a new object.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

MAX_QUBITS = 8
NORM_TOL = 1e-10
PHASE_TOL = 1e-10
# branch probabilities at or below this are reported as exactly zero
ZERO_PROBABILITY = 1e-30


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex, copy=True)
    array.setflags(write=False)
    return array


def _num_qubits_for(length: int) -> int:
    n = int(length).bit_length() - 1
    if n < 1 or 2**n != length:
        raise ValueError(f"length {length} is not 2**n for n >= 1")
    if n > MAX_QUBITS:
        raise ValueError(f"{n} qubits exceeds the dense limit of {MAX_QUBITS}")
    return n


def _check_targets(targets: Sequence[int], num_qubits: int) -> list[int]:
    targets = [int(t) for t in targets]
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate target qubits: {targets}")
    for t in targets:
        if not 0 <= t < num_qubits:
            raise ValueError(f"qubit {t} out of range for {num_qubits} qubits")
    return targets


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state over ``num_qubits`` qubits.

    Any nonzero finite amplitude array of length ``2**n`` is accepted and
    rescaled to unit norm, so unnormalized kets such as ``|0> - |1>`` can be
    written down directly.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        _num_qubits_for(amps.size)
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("the zero vector is not a state")
        object.__setattr__(self, "amplitudes", _frozen(amps / norm))

    @property
    def num_qubits(self) -> int:
        return _num_qubits_for(self.amplitudes.size)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @classmethod
    def basis(cls, bits: str) -> "StateVector":
        """Computational basis state from a bit string, e.g. ``"01"``."""
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"not a bit string: {bits!r}")
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[int(bits, 2)] = 1.0
        return cls(amps)

    @classmethod
    def qubit(cls, alpha: complex, beta: complex) -> "StateVector":
        """Single-qubit state ``alpha|0> + beta|1>`` (rescaled to unit norm)."""
        return cls(np.array([alpha, beta], dtype=complex))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def __repr__(self):
        return f"StateVector(num_qubits={self.num_qubits}, amplitudes={np.round(self.amplitudes, 6).tolist()})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix.

    Construction validates the three properties at ``NORM_TOL`` and raises
    ``ValueError`` on violation.
    """

    entries: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {rho.shape}")
        _num_qubits_for(rho.shape[0])
        if not np.all(np.isfinite(rho)):
            raise ValueError("density matrix entries must be finite")
        if np.max(np.abs(rho - rho.conj().T)) > NORM_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1) > NORM_TOL:
            raise ValueError(f"density matrix trace is {np.trace(rho).real:.3g}, not 1")
        if np.min(np.linalg.eigvalsh(rho)) < -NORM_TOL:
            raise ValueError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "entries", _frozen(rho))

    @property
    def num_qubits(self) -> int:
        return _num_qubits_for(self.entries.shape[0])

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


@dataclass(frozen=True)
class MeasurementBranch:
    """One outcome of a projective Z measurement.

    ``post_state`` is ``None`` when the branch has zero probability; it must
    not be read in that case.
    """

    outcome: int
    probability: float
    post_state: Optional[StateVector]

    @property
    def defined(self) -> bool:
        return self.post_state is not None


def tensor(u: StateVector, v: StateVector) -> StateVector:
    """Kronecker product; ``u``'s qubits come first."""
    return StateVector(np.kron(u.amplitudes, v.amplitudes))


def apply_gate(state: StateVector, gate, targets: Sequence[int]) -> StateVector:
    """Apply a ``2**k x 2**k`` gate to the ordered ``targets`` of ``state``.

    ``targets[0]`` is the most significant qubit of the gate's own index, so
    ``apply_gate(s, cnot(), [0, 1])`` uses qubit 0 as control.  ``gate`` may
    be a :class:`~gatecomplexity.gates.GateMatrix` or a plain array.
    """
    matrix = np.asarray(getattr(gate, "matrix", gate), dtype=complex)
    n = state.num_qubits
    targets = _check_targets(targets, n)
    k = len(targets)
    if matrix.shape != (2**k, 2**k):
        raise ValueError(f"gate of shape {matrix.shape} does not act on {k} qubit(s)")

    psi = state.amplitudes.reshape([2] * n)
    op = matrix.reshape([2] * (2 * k))
    out = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), targets))
    # tensordot leaves the gate's output axes first; move them back in place
    out = np.moveaxis(out, list(range(k)), targets)
    return StateVector(out.reshape(-1))


def to_density(state: StateVector) -> DensityMatrix:
    psi = state.amplitudes
    return DensityMatrix(np.outer(psi, psi.conj()))


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Reduced density matrix on the qubits in ``keep`` (kept in ascending order)."""
    n = rho.num_qubits
    keep = sorted(_check_targets(keep, n))
    if not keep or len(keep) == n:
        raise ValueError("keep must be a nonempty strict subset of the qubits")

    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = list(letters[:n])
    cols = [rows[q] if q not in keep else letters[n + q] for q in range(n)]
    out = "".join(rows[q] for q in keep) + "".join(cols[q] for q in keep)
    tensor_ = rho.entries.reshape([2] * (2 * n))
    reduced = np.einsum(f"{''.join(rows)}{''.join(cols)}->{out}", tensor_)
    d = 2 ** len(keep)
    return DensityMatrix(reduced.reshape(d, d))


def measure_qubit(state: StateVector, q: int) -> tuple[MeasurementBranch, MeasurementBranch]:
    """Both branches of a computational-basis measurement of qubit ``q``."""
    n = state.num_qubits
    (q,) = _check_targets([q], n)
    psi = state.amplitudes.reshape([2] * n)
    branches = []
    for outcome in (0, 1):
        projected = np.zeros_like(psi)
        index = [slice(None)] * n
        index[q] = outcome
        projected[tuple(index)] = psi[tuple(index)]
        p = min(float(np.vdot(projected, projected).real), 1.0)
        if p <= ZERO_PROBABILITY:
            branches.append(MeasurementBranch(outcome, 0.0, None))
        else:
            branches.append(MeasurementBranch(outcome, p, StateVector(projected.reshape(-1))))
    return branches[0], branches[1]


def equal_up_to_global_phase(u: StateVector, v: StateVector, tol: float = PHASE_TOL) -> bool:
    if u.dim != v.dim:
        raise ValueError(f"dimension mismatch: {u.dim} vs {v.dim}")
    a, b = u.amplitudes, v.amplitudes
    k = int(np.argmax(np.abs(b)))
    phase = a[k] / b[k]
    if abs(phase) == 0:
        return False
    phase /= abs(phase)
    return bool(np.linalg.norm(a - phase * b) <= tol)


def fidelity(u: StateVector, v: StateVector) -> float:
    """``|<u|v>|**2`` for pure states."""
    return float(abs(np.vdot(u.amplitudes, v.amplitudes)) ** 2)


def schmidt_coefficients(state: StateVector, cut: int) -> np.ndarray:
    """Schmidt coefficients across the split ``[0, cut) | [cut, n)``."""
    n = state.num_qubits
    if not 0 < cut < n:
        raise ValueError(f"cut must lie strictly between 0 and {n}")
    matrix = state.amplitudes.reshape(2**cut, 2 ** (n - cut))
    return np.linalg.svd(matrix, compute_uv=False)


def schmidt_rank(state: StateVector, cut: int, tol: float = NORM_TOL) -> int:
    return int(np.sum(schmidt_coefficients(state, cut) > tol))


def extract_qubit(state: StateVector, q: int, tol: float = NORM_TOL) -> StateVector:
    """Single-qubit factor of ``state`` on qubit ``q``.

    The state must be a product across ``q`` and the rest.  The factor is read
    off the largest slice of the other qubits, so its global phase is that of
    the written-out ket whenever the other factor's leading amplitude is real
    and positive.
    """
    n = state.num_qubits
    (q,) = _check_targets([q], n)
    psi = np.moveaxis(state.amplitudes.reshape([2] * n), q, -1).reshape(-1, 2)
    if np.linalg.svd(psi, compute_uv=False)[1] > tol:
        raise ValueError(f"qubit {q} is entangled with the rest of the register")
    norms = np.linalg.norm(psi, axis=1)
    # first of the (near-)largest rows, so float noise cannot flip the phase
    row = psi[int(np.flatnonzero(norms >= norms.max() * (1 - 1e-9))[0])]
    return StateVector(row)

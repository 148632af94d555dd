"""The handful of gate matrices needed here, with a unitarity check."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

UNITARY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class GateMatrix:
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex, copy=True)
        if m.shape not in ((2, 2), (4, 4)):
            raise ValueError(f"gate must be 2x2 or 4x4, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other: "GateMatrix") -> "GateMatrix":
        return GateMatrix(self.matrix @ other.matrix, f"{self.label}*{other.label}")

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def is_unitary(g, tol: float = UNITARY_TOL) -> bool:
    """True iff ``max|g g^dagger - I| <= tol``."""
    m = np.asarray(getattr(g, "matrix", g), dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return bool(np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0]))) <= tol)


def stuck_hadamard(theta: float) -> GateMatrix:
    """Hadamard gate whose control angle is frozen at ``theta`` radians.

    ``[[cos t, sin t], [sin t, -cos t]]`` is a reflection (determinant -1) for
    every angle and reduces to the ordinary Hadamard at ``t = pi/4``.
    """
    if not math.isfinite(theta):
        raise ValueError("theta must be finite")
    c, s = math.cos(theta), math.sin(theta)
    return GateMatrix(np.array([[c, s], [s, -c]]), f"Hs({theta:.6g})")


def hadamard() -> GateMatrix:
    return GateMatrix(stuck_hadamard(math.pi / 4).matrix, "H")


def pauli_z() -> GateMatrix:
    return GateMatrix(np.diag([1.0, -1.0]), "Z")


def cnot() -> GateMatrix:
    """Controlled NOT; the first target qubit is the control."""
    return GateMatrix(
        np.array(
            [
                [1, 0, 0, 0],
                [0, 1, 0, 0],
                [0, 0, 0, 1],
                [0, 0, 1, 0],
            ]
        ),
        "CNOT",
    )

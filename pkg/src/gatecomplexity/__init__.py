"""Gate control complexity, stuck-Hadamard fault circuits and teleportation recovery."""

__version__ = "0.1.0"

from .gates import GateMatrix, cnot, hadamard, is_unitary, pauli_z, stuck_hadamard
from .qcore import (
    DensityMatrix,
    MeasurementBranch,
    StateVector,
    apply_gate,
    equal_up_to_global_phase,
    measure_qubit,
    partial_trace,
    tensor,
    to_density,
)
from .infocomplexity import (
    Distribution,
    EntropyReport,
    PrecisionModel,
    control_entropy,
    differential_entropy,
    multiplier_gate_complexity,
    precision_entropy,
    purity,
    rotation_gate_complexity,
    von_neumann_entropy,
)
from .faultcircuits import is_locally_correctable, run_fig2, run_fig3, teleport_once
from .recovery import (
    RecoveryDistribution,
    eq9_partial_sum,
    eq9_term,
    exact_recovery_distribution,
    first_passage_oracle,
    monte_carlo_recovery,
    quantized_recovery,
)

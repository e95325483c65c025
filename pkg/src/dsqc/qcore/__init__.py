"""Small-register statevector engine."""
from ._backend import BACKEND
from .bases import (
    BELL_LABELS,
    OrthonormalBasis,
    basis_by_name,
    bell_basis,
    cat_basis,
    computational_basis,
    is_cat_state,
)
from .measure import (
    MeasurementRecord,
    collapse,
    joint_distribution,
    measure,
    outcome_distribution,
    subsystem_coefficients,
)
from .register import Register
from .rng import make_stream, split, trial_stream
from .state import (
    ATOL,
    MAX_QUBITS,
    PermutationMap,
    StateVector,
    apply_cnot,
    inner_product,
    permute_qubits,
    tensor,
    tensor_all,
)

__all__ = [
    "ATOL",
    "BACKEND",
    "BELL_LABELS",
    "MAX_QUBITS",
    "MeasurementRecord",
    "OrthonormalBasis",
    "PermutationMap",
    "Register",
    "StateVector",
    "apply_cnot",
    "basis_by_name",
    "bell_basis",
    "cat_basis",
    "collapse",
    "computational_basis",
    "inner_product",
    "is_cat_state",
    "joint_distribution",
    "make_stream",
    "measure",
    "outcome_distribution",
    "permute_qubits",
    "split",
    "subsystem_coefficients",
    "tensor",
    "tensor_all",
    "trial_stream",
]

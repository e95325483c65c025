"""Projective measurement of a qubit subset in an orthonormal basis."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import ConsistencyError, ContractViolation
from . import _backend
from .bases import OrthonormalBasis
from .state import ATOL, PermutationMap, StateVector, permute_qubits, tensor


@dataclass(frozen=True)
class MeasurementRecord:
    basis_label: str
    outcome_index: int
    outcome_label: str
    probability: float
    qubit_indices: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "basis": self.basis_label,
            "outcome_index": self.outcome_index,
            "outcome": self.outcome_label,
            "probability": self.probability,
            "qubits": list(self.qubit_indices),
        }

    @classmethod
    def from_dict(cls, d: dict) -> MeasurementRecord:
        return cls(d["basis"], d["outcome_index"], d["outcome"], d["probability"], tuple(d["qubits"]))


def _check(s: StateVector, qubits: Sequence[int], basis: OrthonormalBasis) -> list[int]:
    qubits = [int(q) for q in qubits]
    if len(qubits) != basis.num_qubits:
        raise ContractViolation(
            f"{basis.name} acts on {basis.num_qubits} qubits, got {len(qubits)} indices"
        )
    if len(set(qubits)) != len(qubits):
        raise ContractViolation(f"repeated qubit index in {qubits}")
    if any(not 0 <= q < s.num_qubits for q in qubits):
        raise ContractViolation(f"qubit index out of range for a {s.num_qubits}-qubit state: {qubits}")
    return qubits


def subsystem_coefficients(s: StateVector, qubits: Sequence[int], basis: OrthonormalBasis) -> np.ndarray:
    """Rows are the unnormalized remainder states ``<e_o|_Q |s>``.

    Remainder qubits keep their relative register order.
    """
    qubits = _check(s, qubits, basis)
    return _backend.subsystem_coefficients(s.amplitudes, s.num_qubits, qubits, basis.matrix)


def outcome_distribution(s: StateVector, qubits: Sequence[int], basis: OrthonormalBasis) -> np.ndarray:
    """Born probabilities of each basis element, in basis order."""
    coeffs = subsystem_coefficients(s, qubits, basis)
    return np.einsum("ij,ij->i", coeffs.conj(), coeffs).real


def joint_distribution(s: StateVector, measurements: Sequence[tuple[Sequence[int], OrthonormalBasis]]) -> np.ndarray:
    """Exact joint outcome probabilities of measurements on disjoint qubit sets.

    The result has one axis per measurement, in the order given.
    """
    qubits = [q for qs, _ in measurements for q in qs]
    if len(set(qubits)) != len(qubits):
        raise ContractViolation("joint measurements must act on disjoint qubit sets")
    for qs, basis in measurements:
        _check(s, qs, basis)
    rest = [q for q in range(s.num_qubits) if q not in qubits]
    amps = s.amplitudes.reshape((2,) * s.num_qubits).transpose(qubits + rest)
    dims = [len(b) for _, b in measurements]
    amps = amps.reshape(dims + [1 << len(rest)])
    for axis, (_, basis) in enumerate(measurements):
        amps = np.moveaxis(np.tensordot(basis.matrix.conj(), amps, axes=([1], [axis])), 0, axis)
    return (np.abs(amps) ** 2).sum(axis=-1)


def _choose(probs: np.ndarray, rng: np.random.Generator) -> int:
    cdf = np.cumsum(probs)
    total = cdf[-1]
    if not total > 0:
        raise ConsistencyError("all outcome probabilities vanished")
    idx = int(np.searchsorted(cdf, rng.random() * total, side="right"))
    idx = min(idx, len(probs) - 1)
    while probs[idx] <= 0:  # guard against landing on a zero-width bin at the top edge
        idx -= 1
    return idx


def collapse(
    s: StateVector,
    qubits: Sequence[int],
    basis: OrthonormalBasis,
    rng: np.random.Generator | None = None,
    outcome: int | None = None,
) -> tuple[MeasurementRecord, StateVector | None]:
    """Measure and return the normalized state of the unmeasured qubits.

    The measured qubits end up in the chosen basis element, a product with
    the returned remainder.  Pass ``outcome`` to force a branch (its
    probability must be nonzero) instead of sampling.
    """
    qubits = _check(s, qubits, basis)
    coeffs = _backend.subsystem_coefficients(s.amplitudes, s.num_qubits, qubits, basis.matrix)
    probs = np.einsum("ij,ij->i", coeffs.conj(), coeffs).real
    if outcome is None:
        if rng is None:
            raise ContractViolation("need a random stream or a forced outcome")
        outcome = _choose(probs, rng)
    elif probs[outcome] <= ATOL**2:
        raise ContractViolation(f"forced outcome {basis.labels[outcome]} has zero probability")
    p = float(probs[outcome])
    record = MeasurementRecord(basis.name, outcome, basis.labels[outcome], p, tuple(qubits))
    if len(qubits) == s.num_qubits:
        return record, None
    rest = coeffs[outcome] / np.sqrt(p)
    return record, StateVector(s.num_qubits - len(qubits), rest)


def measure(
    s: StateVector,
    qubits: Sequence[int],
    basis: OrthonormalBasis,
    rng: np.random.Generator | None = None,
    outcome: int | None = None,
) -> tuple[MeasurementRecord, StateVector]:
    """Born-rule measurement; the post-measurement state covers the full register."""
    record, rest = collapse(s, qubits, basis, rng, outcome)
    measured = basis.elements[record.outcome_index]
    if rest is None:
        combined = measured
        order = list(record.qubit_indices)
    else:
        combined = tensor(measured, rest)
        order = list(record.qubit_indices) + [q for q in range(s.num_qubits) if q not in record.qubit_indices]
    return record, permute_qubits(combined, PermutationMap(tuple(order)))

"""Qubit efficiency and the announcement-leakage audit."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import ContractViolation
from .protocol import swap_bases, swap_sets
from .qcore import OrthonormalBasis, StateVector, joint_distribution, tensor
from .states import GenericFormSpec, build_generic

CONVENTIONS = ("total_qubits", "transmitted_qubits")


@dataclass(frozen=True)
class EfficiencyReport:
    c: int
    q: int
    b: int
    eta: Fraction
    convention: str

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "q": self.q,
            "b": self.b,
            "eta": float(self.eta),
            "eta_exact": str(self.eta),
            "convention": self.convention,
        }


def efficiency(m: int, l: int, n: int, convention: str = "total_qubits") -> EfficiencyReport:
    """eta = c / (q + b) for one copy.

    ``b`` counts only Alice's outcome announcements (2m bits); the decoy
    check's classical traffic is excluded.  ``total_qubits`` counts every
    qubit involved (message register, Alice's half, Bob's half, decoys);
    ``transmitted_qubits`` counts only what travels to Bob.
    """
    if convention not in CONVENTIONS:
        raise ContractViolation(f"convention must be one of {CONVENTIONS}")
    if not (m >= 2 and 1 <= n <= min(m, l)):
        raise ContractViolation(f"invalid dimensions (m, l, n) = ({m}, {l}, {n})")
    q = 2 * m + 2 * l if convention == "total_qubits" else 2 * l
    b = 2 * m
    return EfficiencyReport(n, q, b, Fraction(n, q + b), convention)


def announcement_distribution(psi: StateVector, m: int, e_state: StateVector) -> np.ndarray:
    """Exact joint distribution of Alice's two announced outcomes after encoding ``e_state``."""
    if e_state.num_qubits != m or psi.num_qubits <= m:
        raise ContractViolation("state sizes do not match m")
    first, second = swap_sets(m)
    b1, b2 = swap_bases(m)
    return joint_distribution(tensor(e_state, psi), [(first, b1), (second, b2)])


def leakage_of_state(psi: StateVector, m: int, e_states: Sequence[StateVector]) -> float:
    """Max pairwise total-variation distance between announcement distributions.

    Works for any m + l qubit resource state, generic form or not.
    """
    dists = [announcement_distribution(psi, m, e).ravel() for e in e_states]
    worst = 0.0
    for p, q in combinations(dists, 2):
        worst = max(worst, 0.5 * float(np.abs(p - q).sum()))
    return worst


def leakage_audit(
    spec: GenericFormSpec,
    e_basis: OrthonormalBasis | None = None,
    f_basis: OrthonormalBasis | None = None,
) -> float:
    """0 certifies that the announcements say nothing about the encoded value."""
    default_e, default_f = spec.bases()
    e_basis, f_basis = e_basis or default_e, f_basis or default_f
    psi = build_generic(spec, e_basis, f_basis)
    return leakage_of_state(psi, spec.m, [e_basis.elements[i] for i in spec.e_selection])

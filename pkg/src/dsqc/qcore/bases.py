"""Orthonormal measurement bases: computational, Bell and cat."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..errors import ContractViolation
from .state import ATOL, StateVector

_SQRT_HALF = 1.0 / np.sqrt(2.0)

BELL_LABELS = ("psi+", "psi-", "phi+", "phi-")


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Complete orthonormal family over ``num_qubits`` qubits.

    ``matrix`` holds one element per row, so ``matrix.conj() @ amps`` gives
    the overlaps ``<e_i|psi>``.
    """

    name: str
    num_qubits: int
    elements: tuple[StateVector, ...]
    labels: tuple[str, ...]
    matrix: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.elements) != 1 << self.num_qubits:
            raise ContractViolation(
                f"{self.name}: {len(self.elements)} elements cannot span {self.num_qubits} qubits"
            )
        if len(self.labels) != len(self.elements) or len(set(self.labels)) != len(self.labels):
            raise ContractViolation(f"{self.name}: labels must be unique, one per element")
        if any(e.num_qubits != self.num_qubits for e in self.elements):
            raise ContractViolation(f"{self.name}: element on the wrong register size")
        mat = np.array([e.amplitudes for e in self.elements])
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)
        gram = mat.conj() @ mat.T
        if not np.allclose(gram, np.eye(len(self.elements)), rtol=0.0, atol=ATOL):
            raise ContractViolation(f"{self.name}: elements are not orthonormal")

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"{label!r} is not an element of {self.name}") from None

    def element(self, label: str) -> StateVector:
        return self.elements[self.index(label)]


@lru_cache(maxsize=None)
def computational_basis(k: int) -> OrthonormalBasis:
    if k < 1:
        raise ContractViolation("basis needs k >= 1")
    elements = tuple(StateVector.from_bits(format(i, f"0{k}b")) for i in range(1 << k))
    return OrthonormalBasis(
        name=f"computational({k})",
        num_qubits=k,
        elements=elements,
        labels=tuple(format(i, f"0{k}b") for i in range(1 << k)),
    )


def _cat_label(k: int, sign: int, u: str) -> str:
    if k == 1:
        return "+-"[sign]
    if k == 2:
        return BELL_LABELS[2 * int(u, 2) + sign]
    return f"cat({sign},u={u})"


@lru_cache(maxsize=None)
def cat_basis(k: int) -> OrthonormalBasis:
    """All ``(|u> ± |u^c>)/√2`` on ``k`` qubits.

    Representatives ``u`` have leading bit 0; element ``2*int(u[1:]) + sign``
    carries sign ``+`` for ``sign == 0``.  For ``k == 1`` this is ``{|+>, |->}``
    and for ``k == 2`` it is the Bell basis in the order psi+, psi-, phi+, phi-.
    """
    if k < 1:
        raise ContractViolation("cat basis needs k >= 1")
    mask = (1 << k) - 1
    elements, labels = [], []
    for r in range(1 << (k - 1)):
        u = format(r, f"0{k}b")
        for sign in (0, 1):
            amps = np.zeros(1 << k, dtype=np.complex128)
            amps[r] = _SQRT_HALF
            amps[r ^ mask] = -_SQRT_HALF if sign else _SQRT_HALF
            elements.append(StateVector(k, amps))
            labels.append(_cat_label(k, sign, u))
    return OrthonormalBasis(name=f"cat({k})", num_qubits=k, elements=tuple(elements), labels=tuple(labels))


@lru_cache(maxsize=None)
def bell_basis() -> OrthonormalBasis:
    """psi± = (|00> ± |11>)/√2 and phi± = (|01> ± |10>)/√2."""
    s = _SQRT_HALF
    vectors = {
        "psi+": [s, 0, 0, s],
        "psi-": [s, 0, 0, -s],
        "phi+": [0, s, s, 0],
        "phi-": [0, s, -s, 0],
    }
    return OrthonormalBasis(
        name="bell",
        num_qubits=2,
        elements=tuple(StateVector(2, vectors[lab]) for lab in BELL_LABELS),
        labels=BELL_LABELS,
    )


def basis_by_name(name: str, k: int) -> OrthonormalBasis:
    """Resolve a basis family name (``cat``, ``bell``, ``computational``) at size ``k``."""
    if name == "cat":
        return cat_basis(k)
    if name == "computational":
        return computational_basis(k)
    if name == "bell":
        if k != 2:
            raise ContractViolation("the Bell basis is a 2-qubit basis")
        return bell_basis()
    raise ContractViolation(f"unknown basis family {name!r}")


def is_cat_state(s: StateVector, atol: float = 1e-9) -> bool:
    """True for ``(|u> + e^{iθ}|u^c>)/√2``: two equal-weight complementary components."""
    nz = np.flatnonzero(np.abs(s.amplitudes) > atol)
    if len(nz) != 2:
        return False
    mask = (1 << s.num_qubits) - 1
    a, b = nz
    return bool((a ^ b) == mask and abs(abs(s.amplitudes[a]) - abs(s.amplitudes[b])) <= atol)

"""Dense statevectors over small qubit registers.

Register position 0 is the leftmost ket symbol and the amplitude index is the
big-endian integer of the bitstring, so ``|01>`` lives at index 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..errors import ContractViolation, SizeCapError
from . import _backend

ATOL = 1e-12
MAX_QUBITS = 16


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitude array on ``num_qubits`` qubits (read-only)."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ContractViolation("a state needs at least one qubit")
        if self.num_qubits > MAX_QUBITS:
            raise SizeCapError(f"{self.num_qubits} qubits exceeds the cap of {MAX_QUBITS}")
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 1 << self.num_qubits:
            raise ContractViolation(
                f"expected {1 << self.num_qubits} amplitudes, got {amps.shape[0]}"
            )
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > ATOL:
            raise ContractViolation(f"state is not normalized (|psi|^2 = {norm!r})")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = False) -> StateVector:
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        n = int(amps.shape[0]).bit_length() - 1
        if amps.shape[0] != 1 << n:
            raise ContractViolation("amplitude count must be a power of two")
        if normalize:
            norm = np.sqrt(np.vdot(amps, amps).real)
            if norm == 0:
                raise ContractViolation("cannot normalize the zero vector")
            amps = amps / norm
        return cls(n, amps)

    @classmethod
    def from_bits(cls, bits: str) -> StateVector:
        amps = np.zeros(1 << len(bits), dtype=np.complex128)
        amps[int(bits, 2)] = 1.0
        return cls(len(bits), amps)

    @classmethod
    def from_terms(cls, terms: Mapping[str, complex], normalize: bool = True) -> StateVector:
        """Build ``sum_b c_b |b>`` from a ``{bitstring: coefficient}`` mapping."""
        widths = {len(b) for b in terms}
        if len(widths) != 1:
            raise ContractViolation("all bitstrings must have the same width")
        (k,) = widths
        amps = np.zeros(1 << k, dtype=np.complex128)
        for bits, coef in terms.items():
            amps[int(bits, 2)] += coef
        return cls.from_amplitudes(amps, normalize=normalize)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def canonical(self) -> np.ndarray:
        """Amplitudes with the global phase fixed so the first nonzero one is real-positive."""
        amps = self.amplitudes
        nz = np.flatnonzero(np.abs(amps) > ATOL)
        phase = amps[nz[0]] / abs(amps[nz[0]])
        return amps / phase

    def equals(self, other: StateVector, atol: float = ATOL) -> bool:
        """Equality up to global phase."""
        if self.num_qubits != other.num_qubits:
            return False
        return bool(np.allclose(self.canonical(), other.canonical(), rtol=0.0, atol=atol))

    def terms(self, atol: float = ATOL) -> dict[str, complex]:
        """Nonzero amplitudes keyed by bitstring."""
        return {
            format(i, f"0{self.num_qubits}b"): complex(a)
            for i, a in enumerate(self.amplitudes)
            if abs(a) > atol
        }

    def __repr__(self) -> str:
        body = " + ".join(f"({a.real:.4g}{a.imag:+.4g}j)|{b}>" for b, a in self.terms(1e-9).items())
        return f"StateVector({self.num_qubits}, {body})"


@dataclass(frozen=True)
class PermutationMap:
    """Bijection on positions: input position ``i`` goes to output ``mapping[i]``."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        mapping = tuple(int(x) for x in self.mapping)
        if sorted(mapping) != list(range(len(mapping))):
            raise ContractViolation(f"not a bijection on 0..{len(mapping) - 1}: {mapping}")
        object.__setattr__(self, "mapping", mapping)

    @property
    def size(self) -> int:
        return len(self.mapping)

    @classmethod
    def identity(cls, size: int) -> PermutationMap:
        return cls(tuple(range(size)))

    @classmethod
    def swap(cls, size: int, i: int, j: int) -> PermutationMap:
        mapping = list(range(size))
        mapping[i], mapping[j] = j, i
        return cls(tuple(mapping))

    @classmethod
    def random(cls, size: int, rng: np.random.Generator) -> PermutationMap:
        return cls(tuple(int(x) for x in rng.permutation(size)))

    def inverse(self) -> PermutationMap:
        inv = [0] * self.size
        for i, target in enumerate(self.mapping):
            inv[target] = i
        return PermutationMap(tuple(inv))

    def apply(self, items: Sequence) -> list:
        """Reorder a sequence: ``out[mapping[i]] = items[i]``."""
        if len(items) != self.size:
            raise ContractViolation(f"sequence of length {len(items)} vs permutation of size {self.size}")
        out = [None] * self.size
        for i, target in enumerate(self.mapping):
            out[target] = items[i]
        return out


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """``a ⊗ b`` with ``a`` on the lower register positions."""
    return StateVector(a.num_qubits + b.num_qubits, np.outer(a.amplitudes, b.amplitudes).ravel())


def tensor_all(states: Iterable[StateVector]) -> StateVector:
    states = list(states)
    if not states:
        raise ContractViolation("nothing to tensor")
    amps = states[0].amplitudes
    for s in states[1:]:
        amps = np.outer(amps, s.amplitudes).ravel()
    return StateVector(sum(s.num_qubits for s in states), amps)


def permute_qubits(s: StateVector, perm: PermutationMap) -> StateVector:
    """Relabel qubits so that qubit ``i`` ends up at position ``perm.mapping[i]``."""
    if perm.size != s.num_qubits:
        raise ContractViolation(
            f"permutation of size {perm.size} on a {s.num_qubits}-qubit state"
        )
    return StateVector(s.num_qubits, _backend.permute_amplitudes(s.amplitudes, s.num_qubits, perm.mapping))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``."""
    if a.num_qubits != b.num_qubits:
        raise ContractViolation("inner product of states on different register sizes")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def apply_cnot(s: StateVector, control: int, target: int) -> StateVector:
    if control == target or not (0 <= control < s.num_qubits and 0 <= target < s.num_qubits):
        raise ContractViolation(f"bad CNOT qubits ({control}, {target})")
    n = s.num_qubits
    idx = np.arange(1 << n)
    flip = ((idx >> (n - 1 - control)) & 1) << (n - 1 - target)
    return StateVector(n, s.amplitudes[idx ^ flip])

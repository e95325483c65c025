"""A session register: globally numbered qubits held as a product of blocks.

Independent subsystems (protocol copies, decoy pairs, ancillas) stay in
separate dense blocks and are merged only when an operation couples them.
After a measurement the measured qubits are split off into their own block,
which keeps blocks small over a long session.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import ContractViolation, SizeCapError
from .bases import OrthonormalBasis
from .measure import MeasurementRecord, collapse, outcome_distribution
from .state import MAX_QUBITS, StateVector, apply_cnot, tensor_all


class Register:
    def __init__(self, max_block_qubits: int = MAX_QUBITS):
        self.max_block_qubits = max_block_qubits
        self._blocks: dict[int, tuple[list[int], StateVector]] = {}
        self._owner: dict[int, int] = {}
        self._next_qubit = 0
        self._next_block = 0

    def __len__(self) -> int:
        return len(self._owner)

    def __contains__(self, qubit: int) -> bool:
        return qubit in self._owner

    def allocate(self, state: StateVector) -> list[int]:
        """Add an independent subsystem and return its new qubit ids."""
        ids = list(range(self._next_qubit, self._next_qubit + state.num_qubits))
        self._next_qubit += state.num_qubits
        self._store(ids, state)
        return ids

    def _store(self, ids: list[int], state: StateVector) -> None:
        bid = self._next_block
        self._next_block += 1
        self._blocks[bid] = (ids, state)
        for q in ids:
            self._owner[q] = bid

    def _merge(self, qubits: Sequence[int]) -> tuple[list[int], StateVector]:
        for q in qubits:
            if q not in self._owner:
                raise ContractViolation(f"qubit {q} is not in the register")
        bids = list(dict.fromkeys(self._owner[q] for q in qubits))
        if len(bids) == 1:
            return self._blocks[bids[0]]
        ids = [q for b in bids for q in self._blocks[b][0]]
        if len(ids) > self.max_block_qubits:
            raise SizeCapError(
                f"coupling these qubits needs a {len(ids)}-qubit dense block "
                f"(cap {self.max_block_qubits})"
            )
        state = tensor_all(self._blocks[b][1] for b in bids)
        for b in bids:
            del self._blocks[b]
        self._store(ids, state)
        return ids, state

    def block_of(self, qubits: Sequence[int]) -> tuple[list[int], StateVector]:
        """The (merged) block holding all ``qubits``, as ``(ids, state)``."""
        return self._merge(qubits)

    def distribution(self, qubits: Sequence[int], basis: OrthonormalBasis) -> np.ndarray:
        ids, state = self._merge(qubits)
        return outcome_distribution(state, [ids.index(q) for q in qubits], basis)

    def measure(
        self,
        qubits: Sequence[int],
        basis: OrthonormalBasis,
        rng: np.random.Generator | None = None,
        outcome: int | None = None,
    ) -> MeasurementRecord:
        ids, state = self._merge(qubits)
        local = [ids.index(q) for q in qubits]
        record, rest = collapse(state, local, basis, rng, outcome)
        del self._blocks[self._owner[qubits[0]]]
        self._store(list(qubits), basis.elements[record.outcome_index])
        if rest is not None:
            self._store([q for q in ids if q not in qubits], rest)
        return MeasurementRecord(
            record.basis_label, record.outcome_index, record.outcome_label,
            record.probability, tuple(qubits),
        )

    def cnot(self, control: int, target: int) -> None:
        ids, state = self._merge([control, target])
        bid = self._owner[control]
        self._blocks[bid] = (ids, apply_cnot(state, ids.index(control), ids.index(target)))

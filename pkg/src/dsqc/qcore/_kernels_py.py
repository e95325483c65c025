"""Numpy implementations of the inner kernels.

Same signatures as the compiled ``_kernels`` extension; used when the
extension is unavailable or ``DSQC_PURE_PYTHON`` is set.
"""
from __future__ import annotations

import numpy as np


def subsystem_coefficients(amps, num_qubits, qubits, basis):
    """Overlap of each basis row with the state, per remainder index.

    Returns ``c`` with shape ``(2**k, 2**(num_qubits - k))`` where
    ``c[o, r] = sum_s conj(basis[o, s]) * amps[index(s, r)]``, ``s`` runs over
    the measured qubits in the given order and ``r`` over the remaining
    qubits in increasing register order.
    """
    k = len(qubits)
    qubits = [int(q) for q in qubits]
    rest = [q for q in range(num_qubits) if q not in qubits]
    tensor = np.asarray(amps).reshape((2,) * num_qubits)
    moved = np.transpose(tensor, qubits + rest).reshape(1 << k, 1 << (num_qubits - k))
    return np.conj(basis) @ moved


def permute_amplitudes(amps, num_qubits, mapping):
    """Move qubit ``i`` to register position ``mapping[i]``."""
    inverse = np.empty(num_qubits, dtype=np.intp)
    inverse[np.asarray(mapping, dtype=np.intp)] = np.arange(num_qubits)
    tensor = np.asarray(amps).reshape((2,) * num_qubits)
    return np.ascontiguousarray(np.transpose(tensor, inverse)).reshape(-1)

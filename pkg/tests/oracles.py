"""Independent reference computations.

Everything here uses dense vectors and density matrices built directly with
numpy, never the package's register, kernels or reduced-state shortcuts.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

S2 = 1 / math.sqrt(2)
KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)


def ket(bits: str) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for b in bits:
        out = np.kron(out, KET1 if b == "1" else KET0)
    return out


def kron(*vs) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for v in vs:
        out = np.kron(out, v)
    return out


# Bell states with this codebase's naming: psi = |00>±|11>, phi = |01>±|10>
BELL = {
    "psi+": S2 * (ket("00") + ket("11")),
    "psi-": S2 * (ket("00") - ket("11")),
    "phi+": S2 * (ket("01") + ket("10")),
    "phi-": S2 * (ket("01") - ket("10")),
}
PLUS = S2 * (KET0 + KET1)
MINUS = S2 * (KET0 - KET1)


def cat(u: str, sign: int) -> np.ndarray:
    comp = "".join("1" if b == "0" else "0" for b in u)
    return S2 * (ket(u) + sign * ket(comp))


def cat_rows(k: int) -> list[np.ndarray]:
    """All 2^k cat states, leading bit of u fixed to 0, ordered (u, sign)."""
    rows = []
    for tail in range(1 << (k - 1)):
        u = "0" + format(tail, f"0{k - 1}b") if k > 1 else "0"
        rows.append(cat(u, +1))
        rows.append(cat(u, -1))
    return rows


def brown_g(i: int, j: int, k: int) -> np.ndarray:
    return S2 * (ket(f"0{j}{k}") + (-1) ** i * ket(f"1{1 - j}{1 - k}"))


def permute_vector(v: np.ndarray, n: int, perm: list[int]) -> np.ndarray:
    """Move qubit i to position perm[i] by explicit index relabelling."""
    out = np.zeros_like(v)
    for idx in range(1 << n):
        bits = format(idx, f"0{n}b")
        new = ["0"] * n
        for i, b in enumerate(bits):
            new[perm[i]] = b
        out[int("".join(new), 2)] = v[idx]
    return out


def permutation_matrix(n: int, perm: list[int]) -> np.ndarray:
    mat = np.zeros((1 << n, 1 << n))
    for idx in range(1 << n):
        bits = format(idx, f"0{n}b")
        new = ["0"] * n
        for i, b in enumerate(bits):
            new[perm[i]] = b
        mat[int("".join(new), 2), idx] = 1.0
    return mat


def partial_trace(rho: np.ndarray, n: int, keep: list[int]) -> np.ndarray:
    """Trace out every qubit not in ``keep``; result ordered as sorted(keep)."""
    keep = sorted(keep)
    t = rho.reshape([2] * (2 * n))
    traced = [q for q in range(n) if q not in keep]
    for count, q in enumerate(sorted(traced, reverse=True)):
        cur = n - count
        t = np.trace(t, axis1=q, axis2=q + cur)
    d = 1 << len(keep)
    return t.reshape(d, d)


def schmidt_coefficients(v: np.ndarray, left: int, right: int) -> np.ndarray:
    return np.linalg.svd(v.reshape(1 << left, 1 << right), compute_uv=False)


# -- attack oracles ---------------------------------------------------------

def bell_attack_brute_force(carriers: list[np.ndarray], carrier_qubits: list[int], decoys: int, pairs, perm) -> float:
    """Decoy failure probability when Eve Bell-measures sent positions ``pairs``.

    Builds the full P_B' statevector (carrier blocks purified by their
    partners, appended after the transmitted qubits), permutes it, and
    enumerates every branch of Eve's and Bob's measurements.
    """
    # sequence layout: carrier halves, then decoy pairs; purifying qubits go last
    blocks = list(carriers) + [BELL["psi+"]] * decoys
    sizes = list(carrier_qubits) + [2] * decoys
    full = kron(*blocks)
    total_qubits = sum(int(math.log2(len(b))) for b in blocks)
    # positions: for carrier blocks, the transmitted half is the last `size` qubits of the block
    seq_positions, keeper_positions, cursor = [], [], 0
    for b, size in zip(blocks, sizes):
        nq = int(math.log2(len(b)))
        keeper_positions.extend(range(cursor, cursor + nq - size))
        seq_positions.extend(range(cursor + nq - size, cursor + nq))
        cursor += nq
    T = len(seq_positions)
    # order qubits as [sequence in sent order..., keepers...]
    order = [None] * total_qubits
    for p, q in enumerate(seq_positions):
        order[q] = perm[p]
    for k, q in enumerate(keeper_positions):
        order[q] = T + k
    state = permute_vector(full, total_qubits, order)
    rho = np.outer(state, state.conj())
    for x, y in pairs:
        rho = _dephase_bell(rho, total_qubits, x, y)
    c = sum(carrier_qubits)
    fails = []
    for k in range(decoys):
        a, b = perm[c + 2 * k], perm[c + 2 * k + 1]
        proj = _pair_projector(BELL["psi+"], total_qubits, a, b)
        fails.append(1 - np.trace(proj @ rho).real)
    return float(np.mean(fails))


def _pair_projector(v: np.ndarray, n: int, a: int, b: int) -> np.ndarray:
    """|v><v| on qubits (a, b) of an n-qubit register, identity elsewhere."""
    op2 = np.outer(v, v.conj())
    rest = [q for q in range(n) if q not in (a, b)]
    full = np.kron(op2, np.eye(1 << len(rest)))
    # full acts on order (a, b, rest...); relabel to natural order
    order = [a, b] + rest
    perm = [0] * n
    for pos, q in enumerate(order):
        perm[pos] = q
    P = permutation_matrix(n, perm)
    return P @ full @ P.T


def _dephase_bell(rho, n, x, y):
    out = np.zeros_like(rho)
    for v in BELL.values():
        proj = _pair_projector(v, n, x, y)
        out += proj @ rho @ proj
    return out


def capture_replace_brute_force(fake_blocks: list[np.ndarray], fake_seq_qubits: list[int], decoys: int, length: int) -> float:
    """Average over every permutation of a length-``length`` sequence.

    Eve's fake sequence occupies the sent positions unpermuted; Bob undoes
    Alice's permutation and checks his decoy pairs against |psi+>.
    """
    full = kron(*fake_blocks)
    n = int(math.log2(len(full)))
    seq_positions, keepers, cursor = [], [], 0
    for b, size in zip(fake_blocks, fake_seq_qubits):
        nq = int(math.log2(len(b)))
        keepers.extend(range(cursor, cursor + nq - size))
        seq_positions.extend(range(cursor + nq - size, cursor + nq))
        cursor += nq
    order = [None] * n
    for p, q in enumerate(seq_positions):
        order[q] = p
    for k, q in enumerate(keepers):
        order[q] = length + k
    P = permutation_matrix(n, order)
    rho = P @ np.outer(full, full.conj()) @ P.T
    rho_seq = partial_trace(rho, n, list(range(length)))
    carriers = length - 2 * decoys
    results = []
    for perm in itertools.permutations(range(length)):
        fails = []
        for k in range(decoys):
            a, b = perm[carriers + 2 * k], perm[carriers + 2 * k + 1]
            proj = _pair_projector(BELL["psi+"], length, a, b)
            fails.append(1 - np.trace(proj @ rho_seq).real)
        results.append(np.mean(fails))
    return float(np.mean(results))

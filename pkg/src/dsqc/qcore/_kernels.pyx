# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner kernels; see ``_kernels_py`` for the reference versions.

Complex products are spelled out on real/imaginary parts so the C compiler
never routes them through the NaN-safe ``__muldc3`` helper.
"""
import numpy as np


cdef void _offsets(Py_ssize_t num_qubits, Py_ssize_t[::1] positions,
                   Py_ssize_t[::1] out) noexcept nogil:
    # out[s] = register index contribution of bit pattern s on `positions`,
    # filled by doubling from the last position (pattern bit 0) upwards
    cdef Py_ssize_t k = positions.shape[0]
    cdef Py_ssize_t s, j, bit
    cdef Py_ssize_t size = 1
    out[0] = 0
    for j in range(k - 1, -1, -1):
        bit = (<Py_ssize_t>1) << (num_qubits - 1 - positions[j])
        for s in range(size):
            out[size + s] = out[s] | bit
        size *= 2


def subsystem_coefficients(const double complex[::1] amps, Py_ssize_t num_qubits,
                           Py_ssize_t[::1] qubits, const double complex[:, ::1] basis):
    cdef Py_ssize_t k = qubits.shape[0]
    cdef Py_ssize_t d = (<Py_ssize_t>1) << k
    cdef Py_ssize_t nrest = num_qubits - k
    cdef Py_ssize_t R = (<Py_ssize_t>1) << nrest
    cdef Py_ssize_t o, s, r, j, so, q

    flags = np.zeros(num_qubits, dtype=np.intp)
    cdef Py_ssize_t[::1] fv = flags
    for j in range(k):
        fv[qubits[j]] = 1
    rest = np.empty(nrest, dtype=np.intp)
    cdef Py_ssize_t[::1] rv = rest
    j = 0
    for q in range(num_qubits):
        if fv[q] == 0:
            rv[j] = q
            j += 1

    sub_off = np.empty(d, dtype=np.intp)
    rest_off = np.empty(R, dtype=np.intp)
    cdef Py_ssize_t[::1] sv = sub_off
    cdef Py_ssize_t[::1] restv = rest_off
    _offsets(num_qubits, qubits, sv)
    _offsets(num_qubits, rv, restv)

    # gather into (measured pattern, remainder) layout, then combine rows
    moved = np.empty((d, 2 * R), dtype=np.float64)
    out = np.zeros((d, 2 * R), dtype=np.float64)
    cdef double[:, ::1] mv = moved
    cdef double[:, ::1] ov = out
    cdef double complex a
    cdef double br, bi, xr, xi
    with nogil:
        for s in range(d):
            so = sv[s]
            for r in range(R):
                a = amps[so + restv[r]]
                mv[s, 2 * r] = a.real
                mv[s, 2 * r + 1] = a.imag
        for o in range(d):
            for s in range(d):
                br = basis[o, s].real
                bi = -basis[o, s].imag
                if br == 0.0 and bi == 0.0:
                    continue
                for r in range(R):
                    xr = mv[s, 2 * r]
                    xi = mv[s, 2 * r + 1]
                    ov[o, 2 * r] += br * xr - bi * xi
                    ov[o, 2 * r + 1] += br * xi + bi * xr
    return out.view(np.complex128)


def permute_amplitudes(const double complex[::1] amps, Py_ssize_t num_qubits,
                       Py_ssize_t[::1] mapping):
    cdef Py_ssize_t size = amps.shape[0]
    cdef Py_ssize_t low = num_qubits // 2
    cdef Py_ssize_t high = num_qubits - low
    cdef Py_ssize_t nhi = (<Py_ssize_t>1) << high
    cdef Py_ssize_t nlo = (<Py_ssize_t>1) << low
    cdef Py_ssize_t x, i, y, h, base

    # destination offsets contributed by the high and low halves of an index
    hi_tab = np.zeros(nhi, dtype=np.intp)
    lo_tab = np.zeros(nlo, dtype=np.intp)
    cdef Py_ssize_t[::1] hv = hi_tab
    cdef Py_ssize_t[::1] lv = lo_tab
    with nogil:
        for x in range(nhi):
            y = 0
            for i in range(high):
                if (x >> (high - 1 - i)) & 1:
                    y |= (<Py_ssize_t>1) << (num_qubits - 1 - mapping[i])
            hv[x] = y
        for x in range(nlo):
            y = 0
            for i in range(low):
                if (x >> (low - 1 - i)) & 1:
                    y |= (<Py_ssize_t>1) << (num_qubits - 1 - mapping[high + i])
            lv[x] = y

    out = np.empty(size, dtype=np.complex128)
    cdef double complex[::1] ov = out
    with nogil:
        for h in range(nhi):
            base = hv[h]
            for x in range(nlo):
                ov[base | lv[x]] = amps[h * nlo + x]
    return out

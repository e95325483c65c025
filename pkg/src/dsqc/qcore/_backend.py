"""Pick the compiled kernels when importable, else the numpy fallback."""
from __future__ import annotations

import os

import numpy as np

if os.environ.get("DSQC_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = "python" if _impl.__name__.endswith("_py") else "cython"


def subsystem_coefficients(amps: np.ndarray, num_qubits: int, qubits, basis: np.ndarray) -> np.ndarray:
    return _impl.subsystem_coefficients(
        np.ascontiguousarray(amps, dtype=np.complex128),
        num_qubits,
        np.asarray(qubits, dtype=np.intp),
        np.ascontiguousarray(basis, dtype=np.complex128),
    )


def permute_amplitudes(amps: np.ndarray, num_qubits: int, mapping) -> np.ndarray:
    return _impl.permute_amplitudes(
        np.ascontiguousarray(amps, dtype=np.complex128),
        num_qubits,
        np.asarray(mapping, dtype=np.intp),
    )

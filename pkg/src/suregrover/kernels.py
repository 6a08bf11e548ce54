"""Hot state-vector kernels: numba-jitted by default, pure numpy on request.

Set ``SUREGROVER_KERNELS=numpy`` to force the numpy path, ``=numba`` to
require the jitted path (ImportError if numba is missing), or leave unset
/ ``auto`` to use numba when available.  Both paths use a fixed reduction
order, so each backend is deterministic on its own.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_VAR = "SUREGROVER_KERNELS"


def phase_marked_numpy(amps: np.ndarray, marked: np.ndarray, factor: complex) -> np.ndarray:
    """Multiply the amplitudes at ``marked`` indices by ``factor``.

    Returns a new array; entries off the marked set are bit-identical
    copies of the input.
    """
    out = amps.copy()
    out[marked] *= factor
    return out


def mean_shift_numpy(amps: np.ndarray, mean_coef: complex, diag_factor: complex) -> np.ndarray:
    """Return ``mean_coef * sum(amps) - diag_factor * amps`` (new array)."""
    return mean_coef * amps.sum() - diag_factor * amps


def _build_numba_kernels():
    from numba import njit

    @njit(cache=True)
    def phase_marked(amps, marked, factor):
        out = amps.copy()
        for k in range(marked.size):
            out[marked[k]] = amps[marked[k]] * factor
        return out

    @njit(cache=True)
    def mean_shift(amps, mean_coef, diag_factor):
        total = 0.0 + 0.0j
        for i in range(amps.size):
            total += amps[i]
        shift = mean_coef * total
        out = np.empty_like(amps)
        for i in range(amps.size):
            out[i] = shift - diag_factor * amps[i]
        return out

    return phase_marked, mean_shift


def numba_kernels():
    """The jitted kernel pair (compiles lazily on first call)."""
    global _NUMBA_PAIR
    if _NUMBA_PAIR is None:
        _NUMBA_PAIR = _build_numba_kernels()
    return _NUMBA_PAIR


_NUMBA_PAIR = None


def _select_backend() -> str:
    choice = os.environ.get(_ENV_VAR, "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"{_ENV_VAR} must be 'auto', 'numba' or 'numpy', got {choice!r}")
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise
        return "numpy"
    return "numba"


_BACKEND = _select_backend()

if _BACKEND == "numba":
    phase_marked, mean_shift = numba_kernels()
else:
    phase_marked, mean_shift = phase_marked_numpy, mean_shift_numpy


def kernel_backend() -> str:
    """Name of the kernel implementation selected at import: 'numba' or 'numpy'."""
    return _BACKEND

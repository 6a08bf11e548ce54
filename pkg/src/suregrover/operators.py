"""Matrix-free application of the phase oracle and the phased diffusion.

The oracle multiplies every marked amplitude by -exp(i*phi) and leaves the
rest untouched.  The diffusion maps C_i to (2*cos(theta)/N) * sum_j C_j
- exp(i*theta) * C_i, which is the inversion about the mean when theta is
zero.  Adjoints are the same maps with the angle negated.  Both operators
run in O(N) on explicit complex state vectors; dense matrices are built
only inside :func:`check_unitarity`.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .kernels import mean_shift, phase_marked
from .types import ProblemInstance

DENSE_CHECK_LIMIT = 64


def uniform_state(instance: ProblemInstance) -> np.ndarray:
    """The start state: every amplitude exactly 1/sqrt(n_total)."""
    n = instance.n_total
    return np.full(n, 1.0 / math.sqrt(n), dtype=np.complex128)


def _checked(state: np.ndarray, n_total: int) -> np.ndarray:
    amps = np.ascontiguousarray(state, dtype=np.complex128)
    if amps.ndim != 1 or amps.shape[0] != n_total:
        raise ValueError(
            f"state has length {amps.shape[0] if amps.ndim == 1 else amps.shape}, "
            f"expected {n_total}"
        )
    return amps


def apply_oracle(
    state: np.ndarray,
    instance: ProblemInstance,
    phi: float,
    adjoint: bool = False,
) -> np.ndarray:
    """Apply the phase oracle for ``instance.marked`` and return a new state.

    Marked amplitudes pick up the factor -exp(i*phi) (-exp(-i*phi) for the
    adjoint); unmarked amplitudes are bit-identical to the input.
    """
    amps = _checked(state, instance.n_total)
    angle = -phi if adjoint else phi
    factor = -cmath.exp(1j * angle)
    return phase_marked(amps, instance.marked_array, factor)


def apply_diffusion(state: np.ndarray, theta: float, adjoint: bool = False) -> np.ndarray:
    """Apply the phased inversion-about-the-mean and return a new state."""
    amps = np.ascontiguousarray(state, dtype=np.complex128)
    if amps.ndim != 1 or amps.shape[0] < 1:
        raise ValueError("state must be a non-empty 1-d array")
    angle = -theta if adjoint else theta
    n = amps.shape[0]
    mean_coef = complex(2.0 * math.cos(angle) / n)
    diag_factor = cmath.exp(1j * angle)
    return mean_shift(amps, mean_coef, diag_factor)


def check_unitarity(theta: float, n_total: int) -> float:
    """Max deviation of the dense diffusion matrix from unitarity.

    Builds the n_total x n_total matrix explicitly and returns
    ``max |(M^dagger M - I)_ij|``.  Test utility only: refuses
    n_total beyond DENSE_CHECK_LIMIT.
    """
    if not 1 <= n_total <= DENSE_CHECK_LIMIT:
        raise ValueError(
            f"dense unitarity check is limited to n_total <= {DENSE_CHECK_LIMIT}"
        )
    m = np.full((n_total, n_total), 2.0 * math.cos(theta) / n_total, dtype=np.complex128)
    m -= cmath.exp(1j * theta) * np.eye(n_total)
    gram = m.conj().T @ m
    return float(np.max(np.abs(gram - np.eye(n_total))))

"""Closed-form evolution in the invariant marked/unmarked plane.

Starting from the uniform state, the whole evolution stays in the span of
the two uniform class vectors, so an n-block run is captured by a single
complex coefficient pair (A_n, B_n): the state after n double-query
blocks is ``A_n |u> - B_n F_phi^dagger |u>`` with |u> the uniform state.
The pair obeys a linear two-term recurrence in n, which this module
iterates without ever touching an N-dimensional vector.
"""

from __future__ import annotations

import cmath
import math

from .types import PhaseParams, ReducedCoeffs, ReducedState

_ODD_UNSUPPORTED = (
    "only member 1 of the odd sub-family is implemented; "
    "odd members above the first are not supported"
)


def _check_fraction(f: float) -> float:
    f = float(f)
    if not 0.0 < f <= 1.0:
        raise ValueError(f"fraction must lie in (0, 1], got {f}")
    return f


def first_step_coeffs(f: float, params: PhaseParams) -> ReducedCoeffs:
    """Coefficients (A_1, B_1) of a single double-query block.

    B_1 = 2*cos(theta) * exp(-i*theta) * (1 - f - f*exp(i*phi)) and
    A_1 = |B_1|^2 - exp(2i*theta), written out as
    (2*cos(theta))^2 * |1 - f - f*exp(i*phi)|^2 - exp(2i*theta).
    """
    f = _check_fraction(f)
    theta, phi = params.theta, params.phi
    g = 1.0 - f - f * cmath.exp(1j * phi)
    two_cos = 2.0 * math.cos(theta)
    b1 = two_cos * cmath.exp(-1j * theta) * g
    a1 = two_cos * two_cos * (g.real * g.real + g.imag * g.imag) - cmath.exp(2j * theta)
    return ReducedCoeffs(a_n=a1, b_n=b1, steps=1)


def recurrence_step(prev: ReducedCoeffs, first: ReducedCoeffs, theta: float) -> ReducedCoeffs:
    """Advance (A_n, B_n) by one block:

    A_{n+1} = A_1 A_n - exp(-2i*theta) * conj(B_1) * B_n
    B_{n+1} = B_1 A_n - exp(-2i*theta) * B_n
    """
    if first.steps != 1:
        raise ValueError("first must carry single-block coefficients (steps == 1)")
    w = cmath.exp(-2j * theta)
    a1, b1 = first.a_n, first.b_n
    a_next = a1 * prev.a_n - w * b1.conjugate() * prev.b_n
    b_next = b1 * prev.a_n - w * prev.b_n
    return ReducedCoeffs(a_n=a_next, b_n=b_next, steps=prev.steps + 1)


def block_coeffs(f: float, params: PhaseParams, blocks: int) -> ReducedCoeffs:
    """(A_n, B_n) after ``blocks`` double-query blocks (blocks >= 1)."""
    if blocks < 1:
        raise ValueError("blocks must be >= 1")
    first = first_step_coeffs(f, params)
    coeffs = first
    for _ in range(blocks - 1):
        coeffs = recurrence_step(coeffs, first, params.theta)
    return coeffs


def reduced_run(f: float, params: PhaseParams, member: int) -> ReducedState:
    """Final class amplitudes of algorithm member ``member``, in units of 1/sqrt(N).

    Even member 2n runs n double-query blocks:
    amp_unmarked = A_n - B_n and amp_marked = A_n + exp(-i*phi) * B_n.
    Member 1 applies one oracle plus one diffusion directly.  Odd members
    above 1 raise NotImplementedError.
    """
    f = _check_fraction(f)
    if member < 1:
        raise ValueError("member must be >= 1")
    theta, phi = params.theta, params.phi
    if member == 1:
        g = 1.0 - f - f * cmath.exp(1j * phi)
        two_cos = 2.0 * math.cos(theta)
        amp_unmarked = two_cos * g - cmath.exp(1j * theta)
        amp_marked = two_cos * g + cmath.exp(1j * (theta + phi))
        return ReducedState(amp_marked=amp_marked, amp_unmarked=amp_unmarked)
    if member % 2 != 0:
        raise NotImplementedError(_ODD_UNSUPPORTED)
    coeffs = block_coeffs(f, params, member // 2)
    amp_unmarked = coeffs.a_n - coeffs.b_n
    amp_marked = coeffs.a_n + cmath.exp(-1j * phi) * coeffs.b_n
    return ReducedState(amp_marked=amp_marked, amp_unmarked=amp_unmarked)

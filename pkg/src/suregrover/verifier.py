"""End-to-end verification of a run on an explicit database.

``run_full`` drives the O(N) operators on a concrete state vector and
reports exact measurement probabilities; ``run_reduced`` produces the same
report from the two-amplitude dynamics with the database size kept
symbolic; ``cross_validate`` confirms the two backends agree amplitude by
amplitude.
"""

from __future__ import annotations

import math

import numpy as np

from .dynamics import reduced_run
from .operators import apply_diffusion, apply_oracle, uniform_state
from .types import PhaseParams, ProblemInstance, RunReport

FULL_BACKEND_LIMIT = 2**22
CROSS_VALIDATE_LIMIT = 4096

_ODD_UNSUPPORTED = (
    "only member 1 of the odd sub-family is implemented; "
    "odd members above the first are not supported"
)


def _check_member(member: int) -> None:
    if member < 1:
        raise ValueError("member must be >= 1")
    if member != 1 and member % 2 != 0:
        raise NotImplementedError(_ODD_UNSUPPORTED)


def evolve_full(instance: ProblemInstance, member: int, params: PhaseParams) -> np.ndarray:
    """Final state vector of one run of ``member`` on ``instance``."""
    _check_member(member)
    theta, phi = params.theta, params.phi
    state = uniform_state(instance)
    if member == 1:
        state = apply_oracle(state, instance, phi)
        state = apply_diffusion(state, theta)
        return state
    for _ in range(member // 2):
        state = apply_oracle(state, instance, phi)
        state = apply_diffusion(state, theta)
        state = apply_oracle(state, instance, phi, adjoint=True)
        state = apply_diffusion(state, theta, adjoint=True)
    return state


def run_full(instance: ProblemInstance, member: int, params: PhaseParams) -> RunReport:
    """Run on the explicit state vector and report exact probabilities.

    The report carries the total probability on the marked set, the
    largest single unmarked probability, and the mean per-marked-element
    probability (for sure-success phases the latter equals 1/(f*N)).
    Probabilities are exact functions of the final amplitudes; nothing is
    sampled.
    """
    _check_member(member)
    if instance.n_total > FULL_BACKEND_LIMIT:
        raise ValueError(f"full backend limited to n_total <= {FULL_BACKEND_LIMIT}")
    if not (math.isfinite(params.theta) and math.isfinite(params.phi)):
        raise ValueError("phase parameters must be finite")
    state = evolve_full(instance, member, params)
    prob = np.abs(state) ** 2
    marked = instance.marked_array
    success = float(prob[marked].sum())
    unmarked = prob[instance.unmarked_mask]
    max_unmarked = float(unmarked.max()) if unmarked.size else 0.0
    per_marked = float(prob[marked].mean())
    return RunReport(
        instance=instance,
        member=member,
        params=params,
        success_probability=success,
        max_unmarked_probability=max_unmarked,
        per_marked_probability=per_marked,
        backend="full",
        queries=member,
    )


def run_reduced(f: float, member: int, params: PhaseParams) -> RunReport:
    """Report from the reduced dynamics, database size kept symbolic.

    Per-element figures are scaled: per_marked_probability is a multiple
    of the ideal 1/(f*N) and max_unmarked_probability a multiple of the
    uniform weight 1/N, so the sure-success targets are exactly 1 and 0
    regardless of N.
    """
    _check_member(member)
    state = reduced_run(f, params, member)
    success = f * abs(state.amp_marked) ** 2
    max_unmarked = abs(state.amp_unmarked) ** 2 if f < 1.0 else 0.0
    return RunReport(
        instance=None,
        member=member,
        params=params,
        success_probability=success,
        max_unmarked_probability=max_unmarked,
        per_marked_probability=success,
        backend="reduced",
        queries=member,
    )


def cross_validate(instance: ProblemInstance, member: int, params: PhaseParams) -> float:
    """Largest amplitude gap between the full and reduced backends."""
    _check_member(member)
    if instance.n_total > CROSS_VALIDATE_LIMIT:
        raise ValueError(f"cross validation limited to n_total <= {CROSS_VALIDATE_LIMIT}")
    full = evolve_full(instance, member, params)
    reduced = reduced_run(instance.fraction, params, member)
    scale = 1.0 / math.sqrt(instance.n_total)
    expected = np.full(instance.n_total, reduced.amp_unmarked * scale, dtype=np.complex128)
    expected[instance.marked_array] = reduced.amp_marked * scale
    return float(np.max(np.abs(full - expected)))


def sample_measurements(
    instance: ProblemInstance,
    member: int,
    params: PhaseParams,
    shots: int,
    seed: int = 0,
) -> np.ndarray:
    """Demonstration-only seeded sampling of measurement outcomes."""
    state = evolve_full(instance, member, params)
    prob = np.abs(state) ** 2
    prob /= prob.sum()
    rng = np.random.default_rng(seed)
    return rng.choice(instance.n_total, size=shots, p=prob)

"""Sure-success phase-matched search: solvers, reduced dynamics, simulator.

The library finds, for a marked fraction f and a member index n (the
number of database queries), the phase pair (theta, phi) that drives the
final state's unmarked amplitudes to exactly zero, and verifies the claim
by direct state-vector simulation.
"""

from .dynamics import block_coeffs, first_step_coeffs, recurrence_step, reduced_run
from .kernels import kernel_backend
from .operators import apply_diffusion, apply_oracle, check_unitarity, uniform_state
from .solver import (
    SureSuccessCondition,
    condition_polynomial,
    count_roots,
    generate_condition_polynomial,
    solve,
    solve_even,
    solve_member1,
    solve_member2_closed,
    validity_range,
)
from .types import (
    ConditionPolynomial,
    CurveTable,
    PhaseParams,
    ProblemInstance,
    ReducedCoeffs,
    ReducedState,
    RunReport,
    SolutionSet,
    ValidityRange,
    canonical_angle,
)
from .verifier import cross_validate, evolve_full, run_full, run_reduced, sample_measurements

__version__ = "0.1.0"

__all__ = [
    "ConditionPolynomial",
    "CurveTable",
    "PhaseParams",
    "ProblemInstance",
    "ReducedCoeffs",
    "ReducedState",
    "RunReport",
    "SolutionSet",
    "SureSuccessCondition",
    "ValidityRange",
    "apply_diffusion",
    "apply_oracle",
    "block_coeffs",
    "canonical_angle",
    "check_unitarity",
    "condition_polynomial",
    "count_roots",
    "cross_validate",
    "evolve_full",
    "first_step_coeffs",
    "generate_condition_polynomial",
    "kernel_backend",
    "recurrence_step",
    "reduced_run",
    "run_full",
    "run_reduced",
    "sample_measurements",
    "solve",
    "solve_even",
    "solve_member1",
    "solve_member2_closed",
    "uniform_state",
    "validity_range",
]

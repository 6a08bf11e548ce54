import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from suregrover import (
    PhaseParams,
    ProblemInstance,
    apply_diffusion,
    apply_oracle,
    block_coeffs,
    first_step_coeffs,
    recurrence_step,
    reduced_run,
    solve_even,
    solve_member1,
    uniform_state,
)
from suregrover.types import ReducedCoeffs

angles = st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False)
fractions = st.floats(min_value=0.01, max_value=1.0, allow_nan=False)


# Independent oracle: dense 2x2 operators on the (marked, unmarked) class
# amplitudes, in units of 1/sqrt(N).

def oracle_matrix(phi):
    return np.array([[-cmath.exp(1j * phi), 0.0], [0.0, 1.0]], dtype=complex)


def diffusion_matrix(f, theta):
    k = 2.0 * math.cos(theta)
    e = cmath.exp(1j * theta)
    return np.array(
        [[f * k - e, (1.0 - f) * k], [f * k, (1.0 - f) * k - e]], dtype=complex
    )


def block_matrix(f, theta, phi):
    return (
        diffusion_matrix(f, -theta)
        @ oracle_matrix(-phi)
        @ diffusion_matrix(f, theta)
        @ oracle_matrix(phi)
    )


def amplitudes_from(coeffs, phi):
    return np.array(
        [coeffs.a_n + cmath.exp(-1j * phi) * coeffs.b_n, coeffs.a_n - coeffs.b_n],
        dtype=complex,
    )


# ------------------------------------------------------ first-step coeffs

def test_first_step_vanishing_cosine():
    # at theta = pi/2 the mean term dies: B_1 = 0 and A_1 = -exp(i*pi) = 1
    coeffs = first_step_coeffs(0.37, PhaseParams(math.pi / 2, 0.9))
    assert abs(coeffs.b_n) < 1e-15
    assert abs(coeffs.a_n - 1.0) < 1e-15


def test_first_step_frozen_value():
    # frozen from the dense 2x2 product at f=0.5, theta=0.4, phi=0.8
    coeffs = first_step_coeffs(0.5, PhaseParams(0.4, 0.8))
    assert abs(coeffs.a_n - (-0.18210694819652096 - 0.7173560908995228j)) < 1e-15
    assert abs(coeffs.b_n - (-0.7173560908995228j)) < 1e-15


def test_first_step_matches_two_plane_matrix():
    f, params = 0.5, PhaseParams(0.4, 0.8)
    coeffs = first_step_coeffs(f, params)
    via_matrix = block_matrix(f, params.theta, params.phi) @ np.array([1.0, 1.0], dtype=complex)
    gap = np.max(np.abs(via_matrix - amplitudes_from(coeffs, params.phi)))
    assert gap < 1e-14


@settings(max_examples=100, deadline=None)
@given(f=fractions, theta=angles, phi=angles)
def test_first_step_identity(f, theta, phi):
    coeffs = first_step_coeffs(f, PhaseParams(theta, phi))
    identity_gap = abs(coeffs.a_n - (abs(coeffs.b_n) ** 2 - cmath.exp(2j * theta)))
    assert identity_gap < 1e-13


# ------------------------------------------------------------ recurrence

def _b1_squared_and_cos(coeffs, theta):
    return abs(coeffs.b_n) ** 2, 2.0 * math.cos(2.0 * theta)


def test_second_block_printed_expansion():
    rng = np.random.default_rng(5)
    for _ in range(25):
        f = float(rng.uniform(0.05, 1.0))
        theta = float(rng.uniform(-1.5, 1.5))
        params = PhaseParams(theta, 2.0 * theta)
        first = first_step_coeffs(f, params)
        second = recurrence_step(first, first, params.theta)
        b2sq, c = _b1_squared_and_cos(first, params.theta)
        a2_hand = b2sq**2 - (c + cmath.exp(2j * theta)) * b2sq + cmath.exp(4j * theta)
        b2_hand = (b2sq - c) * first.b_n
        assert abs(second.a_n - a2_hand) < 1e-12
        assert abs(second.b_n - b2_hand) < 1e-12


def test_third_block_printed_expansion():
    rng = np.random.default_rng(6)
    for _ in range(25):
        f = float(rng.uniform(0.05, 1.0))
        theta = float(rng.uniform(-1.5, 1.5))
        params = PhaseParams(theta, 2.0 * theta)
        first = first_step_coeffs(f, params)
        third = block_coeffs(f, params, 3)
        b, c = _b1_squared_and_cos(first, params.theta)
        c4 = math.cos(4.0 * theta)
        a3_hand = (
            b**3
            - (2.0 * c + cmath.exp(2j * theta)) * b**2
            + 2.0 * (c4 + 1.0 + cmath.exp(4j * theta)) * b
            - cmath.exp(6j * theta)
        )
        b3_hand = (b**2 - 2.0 * c * b + (2.0 * c4 + 1.0)) * first.b_n
        assert abs(third.a_n - a3_hand) < 1e-12
        assert abs(third.b_n - b3_hand) < 1e-12


def test_recurrence_matches_matrix_powers_up_to_16_blocks():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(40):
        f = float(rng.uniform(0.02, 1.0))
        theta = float(rng.uniform(-1.5, 1.5))
        phi = float(rng.uniform(-math.pi, math.pi))
        params = PhaseParams(theta, phi)
        first = first_step_coeffs(f, params)
        block = block_matrix(f, params.theta, params.phi)
        coeffs, power = first, block.copy()
        for _ in range(16):
            via_matrix = power @ np.array([1.0, 1.0], dtype=complex)
            gap = np.max(np.abs(via_matrix - amplitudes_from(coeffs, params.phi)))
            worst = max(worst, float(gap))
            coeffs = recurrence_step(coeffs, first, params.theta)
            power = block @ power
    assert worst < 1e-11


def test_recurrence_step_requires_single_block_first():
    params = PhaseParams(0.3, 0.6)
    first = first_step_coeffs(0.4, params)
    second = recurrence_step(first, first, params.theta)
    with pytest.raises(ValueError, match="steps == 1"):
        recurrence_step(second, second, params.theta)


# ----------------------------------------------------------- reduced_run

def test_reduced_run_member2_root_kills_unmarked():
    sol = solve_even(0.3, 2)
    state = reduced_run(0.3, PhaseParams(sol.thetas[0], sol.phis[0]), 2)
    assert abs(state.amp_unmarked) < 1e-12


def test_reduced_run_member1_full_fraction_reproduces_uniform():
    state = reduced_run(1.0, PhaseParams(-math.pi / 3, 2.0 * math.pi / 3), 1)
    assert abs(state.amp_marked - 1.0) < 1e-14


def test_reduced_run_member4_root_gives_ideal_marked_weight():
    sol = solve_even(0.5, 4)
    for theta, phi in zip(sol.thetas, sol.phis):
        state = reduced_run(0.5, PhaseParams(theta, phi), 4)
        assert abs(0.5 * abs(state.amp_marked) ** 2 - 1.0) < 1e-12


def test_reduced_run_rejects_higher_odd_members():
    with pytest.raises(NotImplementedError, match="odd members above the first"):
        reduced_run(0.5, PhaseParams(0.1, 0.2), 3)


def test_reduced_run_rejects_bad_fraction():
    with pytest.raises(ValueError, match="fraction"):
        reduced_run(0.0, PhaseParams(0.1, 0.2), 2)


@settings(max_examples=100, deadline=None)
@given(f=fractions, theta=angles, phi=angles, member=st.sampled_from([1, 2, 4, 6, 8]))
def test_reduced_state_keeps_unit_weighted_norm(f, theta, phi, member):
    state = reduced_run(f, PhaseParams(theta, phi), member)
    assert state.norm_residual(f) < 1e-12


@settings(max_examples=100, deadline=None)
@given(f=fractions, theta=angles, phi=angles, member=st.sampled_from([1, 2, 4, 6]))
def test_conjugate_pair_symmetry(f, theta, phi, member):
    fwd = reduced_run(f, PhaseParams(theta, phi), member)
    rev = reduced_run(f, PhaseParams(-theta, -phi), member)
    assert abs(rev.amp_marked - fwd.amp_marked.conjugate()) < 1e-13
    assert abs(rev.amp_unmarked - fwd.amp_unmarked.conjugate()) < 1e-13


# --------------------------------------- agreement with the full simulator

def _full_run_class_amplitudes(instance, member, params):
    state = uniform_state(instance)
    if member == 1:
        state = apply_oracle(state, instance, params.phi)
        state = apply_diffusion(state, params.theta)
    else:
        for _ in range(member // 2):
            state = apply_oracle(state, instance, params.phi)
            state = apply_diffusion(state, params.theta)
            state = apply_oracle(state, instance, params.phi, adjoint=True)
            state = apply_diffusion(state, params.theta, adjoint=True)
    return state


def test_two_plane_closure_of_full_simulation():
    # equal amplitudes stay equal within each class for arbitrary phases
    rng = np.random.default_rng(8)
    for _ in range(20):
        n = int(rng.integers(8, 257))
        n_marked = int(rng.integers(1, n))
        marked = tuple(int(i) for i in rng.choice(n, size=n_marked, replace=False))
        inst = ProblemInstance(n, marked)
        params = PhaseParams(float(rng.uniform(-1.5, 1.5)), float(rng.uniform(-3, 3)))
        member = int(rng.choice([1, 2, 4, 6, 8]))
        state = _full_run_class_amplitudes(inst, member, params)
        on_marked = state[inst.marked_array]
        off_marked = state[inst.unmarked_mask]
        spread = 0.0
        spread = max(spread, float(np.max(np.abs(on_marked - on_marked[0]))))
        if off_marked.size:
            spread = max(spread, float(np.max(np.abs(off_marked - off_marked[0]))))
        assert spread < 1e-12


def test_reduced_run_agrees_with_full_simulation():
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(30):
        n = int(rng.integers(16, 4097))
        n_marked = int(rng.integers(1, n))
        inst = ProblemInstance(n, tuple(int(i) for i in rng.choice(n, size=n_marked, replace=False)))
        params = PhaseParams(float(rng.uniform(-1.5, 1.5)), float(rng.uniform(-3, 3)))
        member = int(rng.choice([1, 2, 4, 6, 8]))
        full = _full_run_class_amplitudes(inst, member, params)
        reduced = reduced_run(inst.fraction, params, member)
        scale = 1.0 / math.sqrt(n)
        expected = np.full(n, reduced.amp_unmarked * scale, dtype=np.complex128)
        expected[inst.marked_array] = reduced.amp_marked * scale
        worst = max(worst, float(np.max(np.abs(full - expected))))
    assert worst < 1e-11


def test_member1_solution_matches_reduced_uniform_start():
    # an accepted member-1 root leaves no unmarked weight
    sol = solve_member1(0.4)
    state = reduced_run(0.4, PhaseParams(sol.thetas[0], sol.phis[0]), 1)
    assert abs(state.amp_unmarked) < 1e-13


def test_block_coeffs_validates_inputs():
    with pytest.raises(ValueError, match="blocks"):
        block_coeffs(0.5, PhaseParams(0.1, 0.2), 0)
    with pytest.raises(ValueError, match=">= 1"):
        ReducedCoeffs(1.0 + 0.0j, 0.0j, 0)

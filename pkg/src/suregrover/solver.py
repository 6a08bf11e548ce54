"""Phase solving: every (theta, phi) pair that makes a member sure-success.

For the even member 2n the choice phi = 2*theta makes the final unmarked
amplitude a real polynomial in x = cos(theta)^2 of degree 2n, with
coefficients polynomial in the marked fraction f.  Small members carry the
hand-checked expanded forms; higher members are expanded exactly, with
rational arithmetic, from the two-term block recurrence.  Roots in (0, 1]
are isolated by a sign-change scan on a uniform grid plus bisection, and
each root is re-verified through the reduced dynamics before it is
accepted.  Member 1 uses its arccos closed form with phi = -2*theta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _ratpoly as rp
from .dynamics import reduced_run
from .types import ConditionPolynomial, PhaseParams, SolutionSet, ValidityRange

ROOT_RESIDUAL_TOL = 1e-10
ROOT_SEPARATION = 1e-8
DEFAULT_GRID_POINTS = 4096
MAX_GRID_POINTS = 65536
DEFAULT_SCAN_POINTS = 2048
BOUNDARY_F_TOL = 1e-9
X_BISECTION_TOL = 1e-15

MEMBER1_F_MIN = 0.25

_ODD_UNSUPPORTED = (
    "only member 1 of the odd sub-family is implemented; "
    "odd members above the first are not supported"
)


def _require_even(member: int) -> None:
    if member < 2 or member % 2 != 0:
        raise ValueError(f"member must be an even integer >= 2, got {member}")


# Expanded condition polynomials for the three smallest even members,
# exact in f:  coefficient tuples are indexed by (power of x, power of f).
_F = Fraction
_STORED_FORMS: dict[int, tuple[tuple[Fraction, ...], ...]] = {
    2: (
        (_F(1),),
        (_F(0), _F(4)),
        (_F(0), _F(-16), _F(16)),
    ),
    4: (
        (_F(1),),
        (_F(0), _F(8)),
        (_F(0), _F(-48), _F(48)),
        (_F(0), _F(0), _F(-64), _F(64)),
        (_F(0), _F(0), _F(256), _F(-512), _F(256)),
    ),
    6: (
        (_F(1),),
        (_F(0), _F(12)),
        (_F(0), _F(-96), _F(96)),
        (_F(0), _F(0), _F(-256), _F(256)),
        (_F(0), _F(0), _F(1280), _F(-2560), _F(1280)),
        (_F(0), _F(0), _F(0), _F(1024), _F(-2048), _F(1024)),
        (_F(0), _F(0), _F(0), _F(-4096), _F(12288), _F(-12288), _F(4096)),
    ),
}


def _block_series() -> tuple[rp.PhaseSeries, rp.PhaseSeries]:
    """Exact (A_1, B_1) with phi = 2*theta, as phase-series over Q[f].

    B_1 = (1 - 2f) - f*exp(2i*theta) + (1 - f)*exp(-2i*theta), and
    A_1 = B_1 * conj(B_1) - exp(2i*theta).
    """
    b1: rp.PhaseSeries = {
        0: [_F(1), _F(-2)],
        2: [_F(0), _F(-1)],
        -2: [_F(1), _F(-1)],
    }
    a1 = rp.ps_sub(rp.ps_mul(b1, rp.ps_conj(b1)), {2: [_F(1)]})
    return a1, b1


@lru_cache(maxsize=None)
def generate_condition_polynomial(member: int) -> ConditionPolynomial:
    """Expand the condition polynomial of an even member from the recurrence.

    Iterates the exact block recurrence with phi = 2*theta, checks that the
    resulting residual series is real (symmetric under conjugation), and
    reduces it to powers of x = cos(theta)^2.
    """
    _require_even(member)
    a1, b1 = _block_series()
    a, b = a1, b1
    for _ in range(member // 2 - 1):
        a_next = rp.ps_sub(rp.ps_mul(a1, a), rp.ps_shift(rp.ps_mul(rp.ps_conj(b1), b), -2))
        b_next = rp.ps_sub(rp.ps_mul(b1, a), rp.ps_shift(b, -2))
        a, b = a_next, b_next
    residual = rp.ps_sub(a, b)
    mu_poly = rp.ps_to_mu_poly(residual)
    for mu_pow in range(1, len(mu_poly), 2):
        if mu_poly[mu_pow]:
            raise RuntimeError(f"member {member}: odd cos-power in residual expansion")
    coefficients = tuple(
        tuple(mu_poly[2 * k]) if mu_poly[2 * k] else (_F(0),)
        for k in range((len(mu_poly) + 1) // 2)
    )
    return ConditionPolynomial(member=member, coefficients=coefficients)


@lru_cache(maxsize=None)
def condition_polynomial(member: int) -> ConditionPolynomial:
    """Condition polynomial of an even member (stored form when hand-checked)."""
    _require_even(member)
    if member in _STORED_FORMS:
        return ConditionPolynomial(member=member, coefficients=_STORED_FORMS[member])
    return generate_condition_polynomial(member)


@dataclass(frozen=True)
class SureSuccessCondition:
    """Callable residual whose zeros in theta give success probability 1.

    phi is bound to 2*theta for even members and to -2*theta for member 1.
    The value is the final scaled unmarked amplitude computed through the
    reduced dynamics, so it is continuous in theta on [0, pi/2].
    """

    member: int
    f: float

    def phi_for(self, theta: float) -> float:
        return -2.0 * theta if self.member == 1 else 2.0 * theta

    def __call__(self, theta: float) -> complex:
        params = PhaseParams(theta=theta, phi=self.phi_for(theta))
        return reduced_run(self.f, params, self.member).amp_unmarked


def _scan_unit_grid(xcoeffs: np.ndarray, grid_points: int):
    """One scan pass: grid values, exact-zero indices, sign-flip brackets.

    Also reports whether any deep dip of |p| occurs away from detected
    roots, which would hint at a root pair hiding inside one cell.
    """
    x = np.linspace(0.0, 1.0, grid_points + 1)
    p = np.polyval(xcoeffs[::-1], x)
    sgn = np.sign(p)
    zero_idx = np.flatnonzero(p == 0.0)
    zeros = []
    prev = -2
    for i in zero_idx:
        if i != prev + 1:
            zeros.append(int(i))
        prev = int(i)
    flips = np.flatnonzero(sgn[:-1] * sgn[1:] < 0.0)
    scale = float(np.abs(xcoeffs).sum()) or 1.0
    absp = np.abs(p)
    inner = absp[1:-1]
    dip = (inner <= absp[:-2]) & (inner <= absp[2:]) & (inner < 1e-7 * scale) & (inner > 0.0)
    no_flip = (sgn[:-2] == sgn[1:-1]) & (sgn[1:-1] == sgn[2:])
    suspicious = bool(np.any(dip & no_flip))
    return x, p, zeros, flips, suspicious


def _scan_with_fallback(xcoeffs: np.ndarray, grid_points: int, max_grid: int = MAX_GRID_POINTS):
    g = int(grid_points)
    while True:
        result = _scan_unit_grid(xcoeffs, g)
        if not result[4] or g >= max_grid:
            return result
        g *= 2


def _roots_in_unit_interval(
    xcoeffs: np.ndarray,
    grid_points: int = DEFAULT_GRID_POINTS,
    x_tol: float = X_BISECTION_TOL,
) -> list[float]:
    """All isolated roots of the polynomial in (0, 1], ascending in x."""
    x, p, zeros, flips, _ = _scan_with_fallback(xcoeffs, grid_points)
    roots = [float(x[i]) for i in zeros if x[i] > 0.0]
    desc = xcoeffs[::-1]
    for i in flips:
        a, b = float(x[i]), float(x[i + 1])
        pa = float(p[i])
        while b - a > x_tol:
            mid = 0.5 * (a + b)
            pm = float(np.polyval(desc, mid))
            if pm == 0.0:
                a = b = mid
                break
            if (pa < 0.0) != (pm < 0.0):
                b = mid
            else:
                a, pa = mid, pm
        roots.append(0.5 * (a + b))
    return sorted(roots)


def count_roots(f: float, member: int, grid_points: int = DEFAULT_GRID_POINTS) -> int:
    """Number of isolated roots of the condition polynomial in x over (0, 1]."""
    _require_even(member)
    coeffs = condition_polynomial(member).x_coefficients(f)
    x, _, zeros, flips, _ = _scan_with_fallback(coeffs, grid_points)
    return sum(1 for i in zeros if x[i] > 0.0) + len(flips)


def _empty(member: int, f: float, note: str) -> SolutionSet:
    return SolutionSet(member=member, f=f, thetas=(), residual_norms=(), count=0, note=note)


def solve_member1(f: float) -> SolutionSet:
    """Phases for the single-query member: theta = arccos(1/(2f) - 1) / 2.

    Takes the non-negative theta branch; phi = -2*theta.  Fractions below
    1/4 yield an empty set carrying an out-of-range note.
    """
    f = float(f)
    if not 0.0 < f <= 1.0:
        raise ValueError(f"fraction must lie in (0, 1], got {f}")
    arg = 1.0 / (2.0 * f) - 1.0
    if arg > 1.0:
        return _empty(1, f, f"no solution; member 1 requires f in [{MEMBER1_F_MIN}, 1.0]")
    theta = 0.5 * math.acos(arg)
    residual = abs(SureSuccessCondition(1, f)(theta))
    return SolutionSet(member=1, f=f, thetas=(theta,), residual_norms=(residual,), count=1)


def solve_member2_closed(f: float) -> SolutionSet:
    """Member 2 by its closed form.

    theta = arccos((sqrt(4/f - 3) + 4f - 3) / (4(1 - f))) / 2 with
    phi = 2*theta, whenever the arccos argument lies in [-1, 1].
    """
    f = float(f)
    if not 0.0 < f <= 1.0:
        raise ValueError(f"fraction must lie in (0, 1], got {f}")
    if f == 1.0:
        return _empty(2, f, "closed form undefined at f = 1 (vanishing denominator)")
    arg = (math.sqrt(4.0 / f - 3.0) + (4.0 * f - 3.0)) / (4.0 * (1.0 - f))
    if not -1.0 <= arg <= 1.0:
        return _empty(2, f, "no solution; arccos argument out of [-1, 1]")
    theta = 0.5 * math.acos(arg)
    residual = abs(SureSuccessCondition(2, f)(theta))
    return SolutionSet(member=2, f=f, thetas=(theta,), residual_norms=(residual,), count=1)


def solve_even(f: float, member: int, grid_points: int = DEFAULT_GRID_POINTS) -> SolutionSet:
    """Every accepted theta for an even member at fraction f, with phi = 2*theta.

    Roots of the condition polynomial are isolated in x = cos(theta)^2 on
    (0, 1] (theta = 0 enters through x = 1 exactly at band boundaries),
    mapped to theta = arccos(sqrt(x)), deduplicated, and re-verified
    against the reduced dynamics: a root is kept only when its residual
    norm is below ROOT_RESIDUAL_TOL.
    """
    _require_even(member)
    f = float(f)
    if not 0.0 < f <= 1.0:
        raise ValueError(f"fraction must lie in (0, 1], got {f}")
    xroots = _roots_in_unit_interval(condition_polynomial(member).x_coefficients(f), grid_points)
    thetas = sorted(math.acos(math.sqrt(min(xr, 1.0))) for xr in xroots if xr > 0.0)
    condition = SureSuccessCondition(member, f)
    kept: list[float] = []
    residuals: list[float] = []
    for theta in thetas:
        if kept and theta - kept[-1] <= ROOT_SEPARATION:
            continue
        residual = abs(condition(theta))
        if residual < ROOT_RESIDUAL_TOL:
            kept.append(theta)
            residuals.append(residual)
    if not kept:
        return _empty(member, f, "no solution at this fraction")
    return SolutionSet(
        member=member,
        f=f,
        thetas=tuple(kept),
        residual_norms=tuple(residuals),
        count=len(kept),
    )


def solve(f: float, member: int, grid_points: int = DEFAULT_GRID_POINTS) -> SolutionSet:
    """Dispatch to the member-1 closed form or the even-member root finder."""
    if member == 1:
        return solve_member1(f)
    if member >= 1 and member % 2 == 1:
        raise NotImplementedError(_ODD_UNSUPPORTED)
    return solve_even(f, member, grid_points)


def _find_transitions(counter, a, b, count_a, count_b, f_tol, out):
    """Recursively locate every count change in (a, b) to within f_tol."""
    if b - a <= f_tol:
        out.append((0.5 * (a + b), count_a, count_b))
        return
    mid = 0.5 * (a + b)
    count_mid = counter(mid)
    if count_mid != count_a:
        _find_transitions(counter, a, mid, count_a, count_mid, f_tol, out)
    if count_mid != count_b:
        _find_transitions(counter, mid, b, count_mid, count_b, f_tol, out)


def validity_range(
    member: int,
    scan_points: int = DEFAULT_SCAN_POINTS,
    f_tol: float = BOUNDARY_F_TOL,
    grid_points: int = DEFAULT_GRID_POINTS,
) -> ValidityRange:
    """Fraction range and multiplicity bands of a member, by count bisection.

    Scans the root count over a uniform fraction grid (extended
    geometrically toward 0 and 1 until the count vanishes at both ends,
    except at f = 1 for member 1 where one solution legitimately remains),
    then bisects every count change to within f_tol.  The band for k roots
    spans the first fraction reaching count k to the last fraction holding
    it; the k = 1 band is (f_min, f_max).
    """
    if member == 1:
        def counter(f: float) -> int:
            return solve_member1(f).count
    elif member >= 2 and member % 2 == 0:
        poly = condition_polynomial(member)

        def counter(f: float) -> int:
            x, _, zeros, flips, _ = _scan_with_fallback(poly.x_coefficients(f), grid_points)
            return sum(1 for i in zeros if x[i] > 0.0) + len(flips)
    else:
        raise NotImplementedError(_ODD_UNSUPPORTED)

    fs = [i / (scan_points + 1) for i in range(1, scan_points + 1)]
    if member == 1:
        fs.append(1.0)
    counts = [counter(f) for f in fs]
    while counts[0] > 0 and fs[0] > 16 * f_tol:
        fs.insert(0, 0.5 * fs[0])
        counts.insert(0, counter(fs[0]))
    while counts[-1] > 0 and member != 1 and 1.0 - fs[-1] > 16 * f_tol:
        fs.append(0.5 * (fs[-1] + 1.0))
        counts.append(counter(fs[-1]))

    transitions: list[tuple[float, int, int]] = []
    for i in range(1, len(fs)):
        if counts[i] != counts[i - 1]:
            _find_transitions(counter, fs[i - 1], fs[i], counts[i - 1], counts[i], f_tol, transitions)
    if not transitions and counts[0] == 0:
        raise RuntimeError(f"member {member}: no valid fraction range detected")

    max_count = max(counts)
    for _, before, after in transitions:
        max_count = max(max_count, before, after)
    f_lo = {k: fs[0] for k in range(1, counts[0] + 1)}
    f_hi = {k: fs[-1] for k in range(1, counts[-1] + 1)}
    for f_t, before, after in sorted(transitions):
        if after > before:
            for k in range(before + 1, after + 1):
                f_lo.setdefault(k, f_t)
        else:
            for k in range(after + 1, before + 1):
                f_hi[k] = f_t
    bands = tuple((f_lo[k], f_hi[k], k) for k in range(1, max_count + 1))
    return ValidityRange(member=member, f_min=bands[0][0], f_max=bands[0][1], multiplicity_bands=bands)

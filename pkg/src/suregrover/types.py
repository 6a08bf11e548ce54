"""Core value types shared across the library."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional

import numpy as np

TWO_PI = 2.0 * math.pi


def canonical_angle(angle: float) -> float:
    """Wrap an angle in radians to the canonical interval (-pi, pi]."""
    a = math.fmod(angle, TWO_PI)
    if a <= -math.pi:
        a += TWO_PI
    elif a > math.pi:
        a -= TWO_PI
    return a


@dataclass(frozen=True)
class ProblemInstance:
    """An unsorted database of ``n_total`` elements with an explicit marked subset.

    ``marked`` holds the indices of the acceptable elements; it is stored
    sorted and duplicates are rejected.  The marked fraction f is always
    exactly ``len(marked) / n_total``.
    """

    n_total: int
    marked: tuple[int, ...]

    def __post_init__(self):
        if self.n_total < 1:
            raise ValueError("n_total must be a positive integer")
        raw = [int(i) for i in self.marked]
        if not raw:
            raise ValueError("marked set must be non-empty")
        if len(set(raw)) != len(raw):
            raise ValueError("marked indices must be unique")
        if min(raw) < 0 or max(raw) >= self.n_total:
            raise ValueError("marked index out of range [0, n_total)")
        object.__setattr__(self, "marked", tuple(sorted(raw)))

    @property
    def n_marked(self) -> int:
        return len(self.marked)

    @property
    def fraction(self) -> float:
        return len(self.marked) / self.n_total

    @cached_property
    def marked_array(self) -> np.ndarray:
        return np.asarray(self.marked, dtype=np.int64)

    @cached_property
    def unmarked_mask(self) -> np.ndarray:
        mask = np.ones(self.n_total, dtype=bool)
        mask[self.marked_array] = False
        return mask


@dataclass(frozen=True)
class PhaseParams:
    """The two phase angles (radians) driving the oracle and the diffusion.

    Angles are canonicalized to (-pi, pi] at construction; they are never
    re-wrapped inside operator application, so repeated runs with equal
    params are bit-reproducible.
    """

    theta: float
    phi: float

    def __post_init__(self):
        for name in ("theta", "phi"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, canonical_angle(value))


@dataclass(frozen=True)
class ReducedCoeffs:
    """Coefficient pair (A_n, B_n) describing n double-query blocks.

    The state after n blocks applied to the uniform state is
    ``A_n |uniform> - B_n F_phi^dagger |uniform>``; ``steps`` records n.
    """

    a_n: complex
    b_n: complex
    steps: int

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")


@dataclass(frozen=True)
class ReducedState:
    """Shared amplitudes of the marked and unmarked classes.

    Amplitudes are expressed in units of the uniform amplitude 1/sqrt(N),
    which removes the explicit database size: the uniform state is
    (1, 1), and the exact norm constraint reads
    ``f * |amp_marked|^2 + (1-f) * |amp_unmarked|^2 == 1``.
    """

    amp_marked: complex
    amp_unmarked: complex

    def norm_residual(self, f: float) -> float:
        """Deviation of the weighted norm from 1 for marked fraction f."""
        total = f * abs(self.amp_marked) ** 2 + (1.0 - f) * abs(self.amp_unmarked) ** 2
        return abs(total - 1.0)


@dataclass(frozen=True)
class SolutionSet:
    """All accepted theta roots for one (member, f), sorted ascending.

    ``note`` is non-empty when the set is empty for a reason worth
    reporting (fraction outside the member's working range, or a guarded
    degenerate input).
    """

    member: int
    f: float
    thetas: tuple[float, ...]
    residual_norms: tuple[float, ...]
    count: int
    note: str = ""

    def __post_init__(self):
        if self.count != len(self.thetas) or self.count != len(self.residual_norms):
            raise ValueError("count must match the number of stored roots")
        if any(b <= a for a, b in zip(self.thetas, self.thetas[1:])):
            raise ValueError("thetas must be strictly increasing")

    @property
    def found(self) -> bool:
        return self.count > 0

    @property
    def phis(self) -> tuple[float, ...]:
        """Matching phi for each root: -2*theta for member 1, 2*theta for even members."""
        sign = -2.0 if self.member == 1 else 2.0
        return tuple(canonical_angle(sign * t) for t in self.thetas)


@dataclass(frozen=True)
class ValidityRange:
    """Fraction range where a member admits at least one solution, with bands.

    ``multiplicity_bands`` holds one ``(f_lo, f_hi, count)`` triple per root
    count from 1 upward; the count-1 band equals (f_min, f_max) and higher
    bands are nested inside it.
    """

    member: int
    f_min: float
    f_max: float
    multiplicity_bands: tuple[tuple[float, float, int], ...]

    def __post_init__(self):
        if not self.f_min < self.f_max:
            raise ValueError("f_min must be below f_max")

    def contains(self, f: float) -> bool:
        return self.f_min <= f <= self.f_max


@dataclass(frozen=True)
class ConditionPolynomial:
    """Sure-success residual of an even member as an exact polynomial.

    With phi locked to 2*theta the residual A_n - B_n is real and equals a
    polynomial in x = cos(theta)^2 whose coefficients are polynomials in
    the marked fraction f with rational coefficients.
    ``coefficients[k][j]`` is the exact coefficient of x^k * f^j.
    """

    member: int
    coefficients: tuple[tuple[Fraction, ...], ...]

    @property
    def degree(self) -> int:
        """Degree in x = cos(theta)^2 (half the degree in cos(theta))."""
        return len(self.coefficients) - 1

    @cached_property
    def _float_matrix(self) -> np.ndarray:
        rows = len(self.coefficients)
        cols = max(len(c) for c in self.coefficients)
        m = np.zeros((rows, cols))
        for k, fpoly in enumerate(self.coefficients):
            for j, q in enumerate(fpoly):
                m[k, j] = float(q)
        return m

    def x_coefficients(self, f: float) -> np.ndarray:
        """Float coefficients of the polynomial in x at a concrete fraction f."""
        powers = float(f) ** np.arange(self._float_matrix.shape[1])
        return self._float_matrix @ powers

    def evaluate(self, f: float, x):
        """Evaluate the residual polynomial at fraction f and x = cos(theta)^2."""
        return np.polyval(self.x_coefficients(f)[::-1], x)


@dataclass(frozen=True)
class RunReport:
    """Measurement statistics of one end-to-end run.

    The full backend reports plain probabilities.  The reduced backend has
    no concrete database size, so its per-element figures are scaled:
    ``per_marked_probability`` is a multiple of the ideal 1/(f*N) and
    ``max_unmarked_probability`` a multiple of the uniform weight 1/N;
    both scalings make the sure-success targets exactly 1 and 0.
    """

    instance: Optional[ProblemInstance]
    member: int
    params: PhaseParams
    success_probability: float
    max_unmarked_probability: float
    per_marked_probability: float
    backend: str
    queries: int

    def __post_init__(self):
        if self.backend not in ("full", "reduced"):
            raise ValueError("backend must be 'full' or 'reduced'")
        if self.queries != self.member:
            raise ValueError("query count must equal the member index")

    def is_sure_success(self, tol: float = 1e-10) -> bool:
        return abs(self.success_probability - 1.0) <= tol


@dataclass(frozen=True)
class CurveTable:
    """theta-versus-f samples for one member, ready for CSV emission.

    Each row is ``(f, roots)`` with roots sorted ascending; rows are sorted
    by f and fractions without a solution keep an empty root tuple.
    """

    member: int
    resolution: int
    rows: tuple[tuple[float, tuple[float, ...]], ...]

    @property
    def max_roots(self) -> int:
        return max((len(r) for _, r in self.rows), default=0)

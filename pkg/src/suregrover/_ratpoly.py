"""Exact rational polynomial bookkeeping for the condition polynomials.

Two small representations, both over Fraction:
  * an f-polynomial is a list of coefficients indexed by power of f;
  * a phase-series is a dict mapping the integer k of exp(i*k*theta) to an
    f-polynomial.
Conjugation of a phase-series flips the sign of every k (the f-polynomials
are real).  A series symmetric under that flip is a real function of theta
and reduces, via the cosine multiple-angle polynomials, to a polynomial in
mu = cos(theta).
"""

from __future__ import annotations

from fractions import Fraction

FPoly = list[Fraction]
PhaseSeries = dict[int, FPoly]

_ZERO = Fraction(0)


def fp_trim(p: FPoly) -> FPoly:
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def fp_add(p: FPoly, q: FPoly) -> FPoly:
    out = [_ZERO] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return fp_trim(out)


def fp_neg(p: FPoly) -> FPoly:
    return [-c for c in p]

def fp_mul(p: FPoly, q: FPoly) -> FPoly:
    if not p or not q:
        return []
    out = [_ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return fp_trim(out)


def fp_scale(p: FPoly, s: Fraction) -> FPoly:
    return fp_trim([s * c for c in p])


def ps_clean(s: PhaseSeries) -> PhaseSeries:
    return {k: v for k, v in ((k, fp_trim(v)) for k, v in s.items()) if v}


def ps_add(a: PhaseSeries, b: PhaseSeries) -> PhaseSeries:
    out = {k: list(v) for k, v in a.items()}
    for k, v in b.items():
        out[k] = fp_add(out.get(k, []), v)
    return ps_clean(out)


def ps_sub(a: PhaseSeries, b: PhaseSeries) -> PhaseSeries:
    return ps_add(a, {k: fp_neg(v) for k, v in b.items()})


def ps_mul(a: PhaseSeries, b: PhaseSeries) -> PhaseSeries:
    out: PhaseSeries = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            prod = fp_mul(va, vb)
            if prod:
                out[ka + kb] = fp_add(out.get(ka + kb, []), prod)
    return ps_clean(out)


def ps_conj(a: PhaseSeries) -> PhaseSeries:
    return {-k: list(v) for k, v in a.items()}


def ps_shift(a: PhaseSeries, delta: int) -> PhaseSeries:
    """Multiply by exp(i*delta*theta)."""
    return {k + delta: list(v) for k, v in a.items()}


def ps_is_symmetric(a: PhaseSeries) -> bool:
    """True when the series equals its conjugate, i.e. is real for real theta."""
    keys = set(a) | set(ps_conj(a))
    for k in keys:
        if fp_add(a.get(k, []), fp_neg(a.get(-k, []))):
            return False
    return True


def cosine_multiple_angle(k: int) -> list[int]:
    """Integer coefficients of cos(k*theta) as a polynomial in cos(theta)."""
    if k == 0:
        return [1]
    prev, cur = [1], [0, 1]
    for _ in range(k - 1):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return cur


def ps_to_mu_poly(a: PhaseSeries) -> list[FPoly]:
    """Reduce a symmetric phase-series to coefficients in mu = cos(theta).

    Returns a list of f-polynomials indexed by power of mu.  Raises if the
    series is not symmetric (not a real function of theta).
    """
    if not ps_is_symmetric(a):
        raise ValueError("phase-series is not real: cannot reduce to cos powers")
    out: list[FPoly] = [[]]

    def add_term(mu_pow: int, fpoly: FPoly) -> None:
        while len(out) <= mu_pow:
            out.append([])
        out[mu_pow] = fp_add(out[mu_pow], fpoly)

    add_term(0, a.get(0, []))
    for k in sorted(k for k in a if k > 0):
        cheb = cosine_multiple_angle(k)
        for mu_pow, c in enumerate(cheb):
            if c:
                add_term(mu_pow, fp_scale(a[k], Fraction(2 * c)))
    while len(out) > 1 and not out[-1]:
        out.pop()
    return out

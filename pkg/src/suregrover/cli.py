"""Command-line front end: solve, scan, verify, check-identities.

Exit codes are a contract: 0 success, 2 usage error, 3 unsupported member,
4 I/O error, 5 fraction outside the member's working range.  The
SUREGROVER_THREADS environment variable caps the scan worker count.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import solver
from .dynamics import first_step_coeffs, recurrence_step, reduced_run
from .operators import check_unitarity
from .types import CurveTable, PhaseParams, ProblemInstance, ReducedCoeffs
from .verifier import run_full, run_reduced

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNSUPPORTED_MEMBER = 3
EXIT_IO = 4
EXIT_OUT_OF_RANGE = 5


@dataclass(frozen=True)
class Config:
    """Tunable tolerances and resolutions; flags take precedence."""

    x_grid_points: int = solver.DEFAULT_GRID_POINTS
    f_scan_points: int = solver.DEFAULT_SCAN_POINTS
    boundary_f_tol: float = solver.BOUNDARY_F_TOL
    success_tol: float = 1e-10
    resolution: int = 512


_CONFIG_TYPES = {
    "x_grid_points": int,
    "f_scan_points": int,
    "boundary_f_tol": float,
    "success_tol": float,
    "resolution": int,
}


def load_config(path: str | None) -> Config:
    """Read key=value overrides; blank lines and '#' comments are skipped."""
    cfg = Config()
    if path is None:
        return cfg
    overrides = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _CONFIG_TYPES:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            overrides[key] = _CONFIG_TYPES[key](value)
    return replace(cfg, **overrides)


class UnsupportedMember(Exception):
    pass


def _check_member(member: int) -> None:
    if member == 1 or (member >= 2 and member % 2 == 0):
        return
    raise UnsupportedMember(
        f"member {member} is not supported (use 1 or any even member >= 2)"
    )


def _range_text(vr) -> str:
    return f"[{vr.f_min:.9f}, {vr.f_max:.9f}]"


def _validity(member: int, cfg: Config):
    return solver.validity_range(
        member,
        scan_points=cfg.f_scan_points,
        f_tol=cfg.boundary_f_tol,
        grid_points=cfg.x_grid_points,
    )


# ---------------------------------------------------------------- solve

def cmd_solve(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    _check_member(args.member)
    if not 0.0 < args.f <= 1.0:
        raise ValueError(f"--f must lie in (0, 1], got {args.f}")
    sol = solver.solve(args.f, args.member, grid_points=cfg.x_grid_points)
    if not sol.found:
        vr = _validity(args.member, cfg)
        print(f"no solution; valid range {_range_text(vr)}")
        if sol.note:
            print(f"note: {sol.note}")
        return EXIT_OUT_OF_RANGE
    print(f"member {args.member}  f = {args.f:.12g}  solutions: {sol.count}")
    for theta, phi, residual in zip(sol.thetas, sol.phis, sol.residual_norms):
        report = run_reduced(args.f, args.member, PhaseParams(theta, phi))
        sure = (
            report.is_sure_success(cfg.success_tol)
            and report.max_unmarked_probability <= cfg.success_tol
        )
        verdict = "sure success" if sure else "NOT sure success"
        print(
            f"  theta = {theta:.12g} rad ({math.degrees(theta):.6f} deg)   "
            f"phi = {phi:.12g} rad ({math.degrees(phi):.6f} deg)   "
            f"residual = {residual:.3e}"
        )
        print(
            f"    reduced run: success probability = {report.success_probability:.12f}  "
            f"max unmarked weight = {report.max_unmarked_probability:.3e}  [{verdict}]"
        )
    return EXIT_OK


# ----------------------------------------------------------------- scan

def _worker_count(n_tasks: int) -> int:
    workers = os.cpu_count() or 1
    cap = os.environ.get("SUREGROVER_THREADS")
    if cap:
        workers = min(workers, max(1, int(cap)))
    return max(1, min(workers, n_tasks))


def scan_curve(member: int, resolution: int, grid_points: int) -> CurveTable:
    """Solve on the uniform fraction grid i/resolution, i = 1..resolution."""
    fs = [i / resolution for i in range(1, resolution + 1)]

    def solve_one(f: float) -> tuple[float, tuple[float, ...]]:
        return f, solver.solve(f, member, grid_points=grid_points).thetas

    workers = _worker_count(len(fs))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = tuple(pool.map(solve_one, fs))
    else:
        rows = tuple(solve_one(f) for f in fs)
    return CurveTable(member=member, resolution=resolution, rows=rows)


def write_curve_csv(table: CurveTable, path: str) -> None:
    columns = max(1, table.max_roots)
    header = "f," + ",".join(f"theta{i + 1}" for i in range(columns))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(header + "\n")
        for f, roots in table.rows:
            cells = [f"{t:.12g}" for t in roots] + [""] * (columns - len(roots))
            fh.write(f"{f:.12g}," + ",".join(cells) + "\n")


def write_range_sidecar(vr, path: str) -> None:
    payload = {
        "member": vr.member,
        "f_min": vr.f_min,
        "f_max": vr.f_max,
        "bands": [
            {"f_lo": lo, "f_hi": hi, "count": count}
            for lo, hi, count in vr.multiplicity_bands
        ],
    }
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def sidecar_path(csv_path: str) -> str:
    return re.sub(r"\.csv$", "", csv_path) + ".range.json"


def cmd_scan(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    _check_member(args.member)
    resolution = args.resolution if args.resolution is not None else cfg.resolution
    if resolution < 2:
        raise ValueError(f"--resolution must be >= 2, got {resolution}")
    out = args.output or f"member{args.member}_curve.csv"
    table = scan_curve(args.member, resolution, cfg.x_grid_points)
    vr = _validity(args.member, cfg)
    write_curve_csv(table, out)
    write_range_sidecar(vr, sidecar_path(out))
    solved = sum(1 for _, roots in table.rows if roots)
    print(f"wrote {out} ({resolution} fractions, {solved} with solutions)")
    print(f"wrote {sidecar_path(out)} (valid range {_range_text(vr)})")
    return EXIT_OK


# --------------------------------------------------------------- verify

def cmd_verify(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    _check_member(args.member)
    if args.marked_count < 1 or args.marked_count > args.n_total:
        raise ValueError("--marked-count must lie in [1, --n-total]")
    f = args.marked_count / args.n_total
    vr = _validity(args.member, cfg)
    if not vr.contains(f):
        print(
            f"f = {f:.12g} is outside member {args.member}'s valid range {_range_text(vr)}"
        )
        return EXIT_OUT_OF_RANGE
    sol = solver.solve(f, args.member, grid_points=cfg.x_grid_points)
    if not sol.found:
        print(
            f"f = {f:.12g} admits no solution for member {args.member}; "
            f"valid range {_range_text(vr)}"
        )
        return EXIT_OUT_OF_RANGE
    rng = np.random.default_rng(args.seed)
    marked = rng.choice(args.n_total, size=args.marked_count, replace=False)
    instance = ProblemInstance(n_total=args.n_total, marked=tuple(int(i) for i in marked))
    theta, phi = sol.thetas[0], sol.phis[0]
    report = run_full(instance, args.member, PhaseParams(theta, phi))
    print(
        f"member {args.member}  N = {args.n_total}  marked = {args.marked_count}  "
        f"f = {f:.12g}  (roots available: {sol.count})"
    )
    print(f"  theta = {theta:.12g} rad   phi = {phi:.12g} rad   queries = {report.queries}")
    print(f"  success probability      = {report.success_probability:.15f}")
    print(f"  per-marked probability   = {report.per_marked_probability:.6e}"
          f"   (ideal 1/(f*N) = {1.0 / args.marked_count:.6e})")
    print(f"  max unmarked probability = {report.max_unmarked_probability:.3e}")
    ok = report.is_sure_success(cfg.success_tol)
    print("verdict: sure success" if ok else "verdict: NOT sure success")
    return EXIT_OK if ok else 1


# ------------------------------------------------------- check-identities

def _two_plane_step(f: float, theta: float, phi: float) -> np.ndarray:
    """Dense 2x2 double-query block on the (marked, unmarked) class pair."""

    def diffusion(t: float) -> np.ndarray:
        k = 2.0 * math.cos(t)
        e = cmath.exp(1j * t)
        return np.array([[f * k - e, (1.0 - f) * k], [f * k, (1.0 - f) * k - e]], dtype=complex)

    def oracle(p: float) -> np.ndarray:
        return np.array([[-cmath.exp(1j * p), 0.0], [0.0, 1.0]], dtype=complex)

    return diffusion(-theta) @ oracle(-phi) @ diffusion(theta) @ oracle(phi)


def _check_unitarity_suite() -> tuple[bool, str]:
    worst = 0.0
    for n in (2, 4, 8, 16, 64):
        for theta in (-2.5, -0.7, 0.0, 0.3, 1.234, 3.0):
            worst = max(worst, check_unitarity(theta, n))
    return worst < 1e-13, f"max unitarity deviation {worst:.2e}"


def _check_recurrence(seed: int, flip_b1: bool) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(60):
        f = float(rng.uniform(0.02, 1.0))
        theta = float(rng.uniform(-1.5, 1.5))
        phi = 2.0 * theta if rng.uniform() < 0.5 else float(rng.uniform(-math.pi, math.pi))
        params = PhaseParams(theta, phi)
        first = first_step_coeffs(f, params)
        if flip_b1:
            first = ReducedCoeffs(a_n=first.a_n, b_n=-first.b_n, steps=1)
        block = _two_plane_step(f, params.theta, params.phi)
        matrix_power = block.copy()
        coeffs = first
        for n in range(1, 17):
            via_matrix = matrix_power @ np.array([1.0, 1.0], dtype=complex)
            via_recurrence = np.array(
                [
                    coeffs.a_n + cmath.exp(-1j * params.phi) * coeffs.b_n,
                    coeffs.a_n - coeffs.b_n,
                ],
                dtype=complex,
            )
            worst = max(worst, float(np.max(np.abs(via_matrix - via_recurrence))))
            coeffs = recurrence_step(coeffs, first, params.theta)
            matrix_power = block @ matrix_power
    return worst < 1e-11, f"max block-recurrence gap {worst:.2e} over n <= 16"


def _check_polynomials(members: list[int], seed: int) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    details = []
    ok = True
    for member in members:
        generated = solver.generate_condition_polynomial(member)
        stored = solver.condition_polynomial(member)
        if generated.coefficients != stored.coefficients:
            ok = False
            details.append(f"member {member}: generated != stored")
            continue
        worst = 0.0
        for _ in range(50):
            f = float(rng.uniform(0.02, 0.98))
            theta = float(rng.uniform(0.0, math.pi / 2))
            poly_value = generated.evaluate(f, math.cos(theta) ** 2)
            dyn_value = solver.SureSuccessCondition(member, f)(theta)
            worst = max(worst, abs(poly_value - dyn_value))
        if worst > 1e-9:
            ok = False
        details.append(f"member {member}: dynamics gap {worst:.2e}")
    return ok, "; ".join(details)


def _check_symmetry(seed: int) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(200):
        f = float(rng.uniform(0.02, 1.0))
        theta = float(rng.uniform(-1.5, 1.5))
        phi = float(rng.uniform(-math.pi, math.pi))
        member = int(rng.choice([1, 2, 4, 6, 8]))
        fwd = reduced_run(f, PhaseParams(theta, phi), member)
        rev = reduced_run(f, PhaseParams(-theta, -phi), member)
        worst = max(
            worst,
            abs(rev.amp_marked - fwd.amp_marked.conjugate()),
            abs(rev.amp_unmarked - fwd.amp_unmarked.conjugate()),
        )
    return worst < 1e-13, f"max conjugate-pair gap {worst:.2e}"


def cmd_check_identities(args: argparse.Namespace) -> int:
    members = [int(tok) for tok in args.members.split(",") if tok.strip()]
    for member in members:
        if member < 2 or member % 2:
            raise ValueError(f"--members entries must be even and >= 2, got {member}")
    checks = [
        ("diffusion unitarity", _check_unitarity_suite()),
        ("block recurrence vs matrix powers", _check_recurrence(args.seed, args.inject_b1_sign_flip)),
        ("condition polynomials", _check_polynomials(members, args.seed)),
        ("conjugate-pair symmetry", _check_symmetry(args.seed)),
    ]
    failures = 0
    for name, (passed, detail) in checks:
        tag = "pass" if passed else "FAIL"
        print(f"check {name}: {tag} ({detail})")
        if not passed:
            failures += 1
    if failures:
        print(f"{failures} check(s) failed")
        return 1
    print("all checks passed")
    return EXIT_OK


# ----------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="suregrover",
        description=(
            "Solve for the oracle/diffusion phases that make the n-query search "
            "member succeed with probability exactly 1, and verify by simulation."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one (member, f) and verify the roots")
    p_solve.add_argument("--member", type=int, required=True)
    p_solve.add_argument("--f", type=float, required=True, help="marked fraction in (0, 1]")
    p_solve.add_argument("--config", default=None)
    p_solve.set_defaults(func=cmd_solve)

    p_scan = sub.add_parser("scan", help="tabulate theta versus f as CSV plus a range sidecar")
    p_scan.add_argument("--member", type=int, required=True)
    p_scan.add_argument("--resolution", type=int, default=None, help="number of f samples")
    p_scan.add_argument("--output", default=None, help="CSV path (default member<N>_curve.csv)")
    p_scan.add_argument("--config", default=None)
    p_scan.set_defaults(func=cmd_scan)

    p_verify = sub.add_parser("verify", help="solve and run the full simulator on a random instance")
    p_verify.add_argument("--member", type=int, required=True)
    p_verify.add_argument("--n-total", type=int, required=True)
    p_verify.add_argument("--marked-count", type=int, required=True)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--config", default=None)
    p_verify.set_defaults(func=cmd_verify)

    p_check = sub.add_parser("check-identities", help="run the cross-module consistency checks")
    p_check.add_argument("--members", default="2,4,6", help="comma-separated even members")
    p_check.add_argument("--seed", type=int, default=12345)
    p_check.add_argument("--inject-b1-sign-flip", action="store_true", help=argparse.SUPPRESS)
    p_check.add_argument("--config", default=None)
    p_check.set_defaults(func=cmd_check_identities)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedMember as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED_MEMBER
    except NotImplementedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED_MEMBER
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

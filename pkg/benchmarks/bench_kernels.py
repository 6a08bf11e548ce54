"""Benchmark the jitted state-vector kernels against the pure-numpy path.

Times the two hot kernels (marked-phase update and mean-shift diffusion)
at several database sizes and prints a speedup table.  The jitted pair is
warmed up once before timing so compilation is not measured.

Run: python benchmarks/bench_kernels.py [--sizes 65536,1048576,4194304] [--repeats 20]
"""

import argparse
import time

import numpy as np

from suregrover.kernels import (
    mean_shift_numpy,
    numba_kernels,
    phase_marked_numpy,
)


def time_call(fn, *args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="65536,1048576,4194304")
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--marked-fraction", type=float, default=0.25)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    try:
        phase_jit, mean_jit = numba_kernels()
    except ImportError:
        print("numba is not importable; nothing to compare")
        return

    rng = np.random.default_rng(0)
    factor = complex(-np.exp(0.37j))
    print(f"{'N':>9}  {'kernel':<12} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8}")
    for n in sizes:
        amps = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        amps /= np.linalg.norm(amps)
        n_marked = max(1, int(args.marked_fraction * n))
        marked = np.sort(rng.choice(n, size=n_marked, replace=False)).astype(np.int64)

        # warm-up: trigger compilation and check agreement
        out_np = phase_marked_numpy(amps, marked, factor)
        out_nb = phase_jit(amps, marked, factor)
        assert np.max(np.abs(out_np - out_nb)) < 1e-14
        mean_np = mean_shift_numpy(amps, complex(2.0 / n), factor)
        mean_nb = mean_jit(amps, complex(2.0 / n), factor)
        assert np.max(np.abs(mean_np - mean_nb)) < 1e-12

        t_np = time_call(phase_marked_numpy, amps, marked, factor, repeats=args.repeats)
        t_nb = time_call(phase_jit, amps, marked, factor, repeats=args.repeats)
        print(f"{n:>9}  {'phase':<12} {t_np * 1e3:>11.3f} {t_nb * 1e3:>11.3f} {t_np / t_nb:>7.2f}x")

        t_np = time_call(mean_shift_numpy, amps, complex(2.0 / n), factor, repeats=args.repeats)
        t_nb = time_call(mean_jit, amps, complex(2.0 / n), factor, repeats=args.repeats)
        print(f"{n:>9}  {'mean-shift':<12} {t_np * 1e3:>11.3f} {t_nb * 1e3:>11.3f} {t_np / t_nb:>7.2f}x")


if __name__ == "__main__":
    main()

"""Benchmark the numba kernels against their pure-numpy fallbacks.

Run:  python benchmarks/bench_backends.py [--reps N]

Times the three hot kernels (sliding-window DTW, spline upsampling,
Hankel anti-diagonal averaging) on pipeline-sized inputs under both
backends and verifies the outputs agree exactly.
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from pulsemotion import _kernels as K


def timeit(fn, reps):
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=5)
    args = parser.parse_args()

    if K.dtw_pair_numba is None:
        print("numba backend unavailable (not installed or disabled); "
              "nothing to compare")
        return 1

    rng = np.random.default_rng(0)

    component = rng.standard_normal(4991)           # 20 s at 250 Hz
    pattern = rng.standard_normal(250)              # 1 s window
    n_win = (component.size - pattern.size) // 5 + 1
    rows = rng.standard_normal((40, 500))           # 40 features, 20 s at 25 fps
    mat = rng.standard_normal((100, 401))           # SSA trajectory matrix

    cases = [
        ("mdtw 250x4991 step5",
         lambda: K.mdtw_numba(pattern, component, 5, n_win),
         lambda: K.mdtw_numpy(pattern, component, 5, n_win)),
        ("spline 40x500 x10",
         lambda: K.spline_resample_numba(np.ascontiguousarray(rows), 10),
         lambda: K.spline_resample_numpy(rows, 10)),
        ("hankelize 100x401",
         lambda: K.hankelize_numba(np.ascontiguousarray(mat)),
         lambda: K.hankelize_numpy(mat)),
    ]

    print(f"{'kernel':24s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, f_nb, f_np in cases:
        out_nb = f_nb()   # warm-up / compile
        out_np = f_np()
        assert np.array_equal(out_nb, out_np), f"{name}: backends disagree"
        t_nb = timeit(f_nb, args.reps)
        t_np = timeit(f_np, args.reps)
        print(f"{name:24s} {t_nb * 1e3:9.2f}ms {t_np * 1e3:9.2f}ms "
              f"{t_np / t_nb:7.1f}x")
    print("outputs agree bit-for-bit on all kernels")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

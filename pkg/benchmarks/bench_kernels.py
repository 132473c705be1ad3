"""Compare the numba and numpy average-derivative kernels.

    python benchmarks/bench_kernels.py [--n 250 500 1000 2000] [--d 3 5] [--repeat 5]

Prints the best wall time of each path and the largest relative difference
between their outputs. The first numba call (compilation) is excluded.
"""

import argparse
import time

import numpy as np

from indexcvm._jit import HAS_NUMBA
from indexcvm._kernels import ade_pair_sum


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[250, 500, 1000, 2000])
    ap.add_argument("--d", type=int, nargs="+", default=[3, 5])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    if HAS_NUMBA:
        ade_pair_sum(rng.uniform(size=(4, 1)), np.array([0, 1, 0, 1]), np.ones(1), use_numba=True)
    print(f"{'n':>6} {'d':>3} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8} {'max rel diff':>13}")
    for d in args.d:
        for n in args.n:
            x = rng.uniform(-1, 1, (n, d))
            y = (rng.uniform(size=n) < 0.5).astype(np.int64)
            h = np.full(d, n ** (-1.0 / (d + 6)))
            t_np, out_np = best_time(lambda: ade_pair_sum(x, y, h, use_numba=False), args.repeat)
            if HAS_NUMBA:
                t_nb, out_nb = best_time(lambda: ade_pair_sum(x, y, h, use_numba=True), args.repeat)
                rel = float(np.max(np.abs(out_nb - out_np)) / np.max(np.abs(out_np)))
                print(f"{n:6d} {d:3d} {1e3 * t_np:11.2f} {1e3 * t_nb:11.2f} {t_np / t_nb:8.1f} {rel:13.1e}")
            else:
                print(f"{n:6d} {d:3d} {1e3 * t_np:11.2f} {'n/a':>11} {'n/a':>8} {'n/a':>13}")


if __name__ == "__main__":
    main()

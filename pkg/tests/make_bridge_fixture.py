"""Regenerate ``data/bridge_l2_hist.npz``: 10^6 random-walk Brownian bridges on a 2^14 grid.

The draws of ``int_0^1 B^2`` are histogrammed on a 2e-5 grid over [0, 2.5],
which is enough to bound the Kolmogorov distance on [0.02, 2] to within
about 1e-4 of its exact value. Run from the ``tests`` directory::

    python make_bridge_fixture.py
"""

import numpy as np

from oracles import simulate_bridge_l2

N_PATHS = 1_000_000
N_GRID = 2 ** 14
SEED = 314159
BIN_WIDTH = 2e-5
X_HI = 2.5


def main(path="data/bridge_l2_hist.npz"):
    draws = np.concatenate([simulate_bridge_l2(N_PATHS // 10, N_GRID, SEED + c) for c in range(10)])
    edges = np.linspace(0.0, X_HI, int(round(X_HI / BIN_WIDTH)) + 1)
    counts, _ = np.histogram(draws, bins=edges)
    np.savez_compressed(
        path,
        edges_hi=X_HI,
        n_bins=edges.size - 1,
        counts=counts.astype(np.int32),
        below=int(np.sum(draws < 0.0)),
        above=int(np.sum(draws >= X_HI)),
        n_paths=N_PATHS,
        n_grid=N_GRID,
        seed=SEED,
        mean=draws.mean(),
        var=draws.var(ddof=1),
    )


if __name__ == "__main__":
    main()

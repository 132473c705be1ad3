"""Independent reference implementations used only by the tests.

Everything here is written straight from the defining formulas with naive
loops; none of it calls into the code path it checks.
"""

import math

import numpy as np
from numba import njit
from scipy import special


def naive_partition_cells(v, m):
    """Cell ids from the order-statistic rule, by explicit loops."""
    n = len(v)
    s = sorted(v)
    bounds = [s[0] - 1.0]
    for k in range(1, m):
        r = -(-k * n // m)  # ceil(k n / m)
        bounds.append(s[r - 1])
    bounds.append(s[-1])
    cells = []
    for vi in v:
        for k in range(1, m + 1):
            if bounds[k - 1] < vi <= bounds[k]:
                cells.append(k)
                break
    return cells


def literal_statistic(xs, ys, zs, beta, m):
    """T_n by direct transcription of the within-cell ECDFs, the class processes and the integral."""
    n = len(ys)
    v = [sum(xs[i][j] * beta[j] for j in range(len(beta))) for i in range(n)]
    cell = naive_partition_cells(v, m)
    idx = {(j, k): [i for i in range(n) if ys[i] == j and cell[i] == k] for j in (0, 1) for k in range(1, m + 1)}
    n_jk = {key: len(val) for key, val in idx.items()}
    n_j = [sum(n_jk[(j, k)] for k in range(1, m + 1)) for j in (0, 1)]

    def f_hat_jk(j, k, z):
        return sum(1 for i in idx[(j, k)] if zs[i] < z) / n_jk[(j, k)]

    def f_hat_k(k, z):
        tot = n_jk[(0, k)] + n_jk[(1, k)]
        out = 0.0
        for j in (0, 1):
            if n_jk[(j, k)]:
                out += n_jk[(j, k)] / tot * f_hat_jk(j, k, z)
        return out

    t = [f_hat_k(cell[i], zs[i]) for i in range(n)]

    def gamma_j(j, u):
        return sum(1 for k in range(1, m + 1) for i in idx[(j, k)] if t[i] < u) / n_j[j]

    corr = 0.0
    for k in range(1, m + 1):
        corr += (n_jk[(0, k)] / n_j[0] - n_jk[(1, k)] / n_j[1]) ** 2 / (n_jk[(0, k)] + n_jk[(1, k)])
    denom = math.sqrt(1.0 - n_j[0] * n_j[1] / n * corr)
    scale = math.sqrt(n_j[0] * n_j[1] / n)

    knots = sorted(set([0.0, 1.0] + t))
    total = 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        u = 0.5 * (a + b)
        g = scale * (gamma_j(0, u) - gamma_j(1, u)) / denom
        total += g * g * (b - a)
    return total


def classical_two_sample_cvm(z0, z1):
    """Anderson's rank form of the two-sample Cramer-von Mises criterion (no ties)."""
    n0, n1 = len(z0), len(z1)
    n = n0 + n1
    pooled = sorted(list(z0) + list(z1))
    rank = {z: r + 1 for r, z in enumerate(pooled)}
    r = sorted(rank[z] for z in z0)
    s = sorted(rank[z] for z in z1)
    u = n0 * sum((ri - i) ** 2 for i, ri in enumerate(r, start=1)) + n1 * sum(
        (sj - j) ** 2 for j, sj in enumerate(s, start=1)
    )
    return u / (n0 * n1 * n) - (4 * n0 * n1 - 1) / (6 * n)


def naive_ade(xs, ys, h):
    """-(2/n) sum_i y_i grad f_{-i}(x_i) with an explicit double loop over all ordered pairs."""
    n, d = len(xs), len(xs[0])
    delta = [0.0] * d
    for i in range(n):
        grad = [0.0] * d
        for l in range(n):
            if l == i:
                continue
            kern = 1.0
            for j in range(d):
                u = (xs[i][j] - xs[l][j]) / h[j]
                kern *= math.exp(-0.5 * u * u) / (math.sqrt(2.0 * math.pi) * h[j])
            for j in range(d):
                grad[j] += kern * (-(xs[i][j] - xs[l][j]) / h[j] ** 2) / (n - 1)
        for j in range(d):
            delta[j] += -2.0 / n * ys[i] * grad[j]
    return np.array(delta)


def bessel_series_cdf(x, terms=60):
    """Closed-form Bessel-K series for the CDF of int_0^1 B^2 (Anderson and Darling, 1952)."""
    if x <= 0:
        return 0.0
    s = 0.0
    for j in range(terms):
        a = (4 * j + 1) ** 2 / (16.0 * x)
        c = special.gamma(j + 0.5) / (special.gamma(0.5) * math.factorial(j))
        s += c * math.sqrt(4 * j + 1) * math.exp(-a) * special.kv(0.25, a)
    return s / (math.pi * math.sqrt(x))


@njit(cache=True)
def _seed(seed):
    np.random.seed(seed)


@njit(cache=True)
def _bridge_l2(n_paths, n_grid):
    out = np.empty(n_paths)
    w = np.empty(n_grid + 1)
    sd = math.sqrt(1.0 / n_grid)
    for p in range(n_paths):
        w[0] = 0.0
        for k in range(1, n_grid + 1):
            w[k] = w[k - 1] + sd * np.random.standard_normal()
        acc = 0.0
        for k in range(1, n_grid):
            b = w[k] - (k / n_grid) * w[n_grid]
            acc += b * b
        out[p] = acc / n_grid  # trapezoid, B(0) = B(1) = 0
    return out


def simulate_bridge_l2(n_paths, n_grid, seed):
    """Monte Carlo draws of int_0^1 B^2 from random-walk Brownian bridges."""
    _seed(seed)
    return _bridge_l2(n_paths, n_grid)

"""Hot numeric kernels, each with a numba loop and a vectorised numpy twin.

``ade_pair_sum`` is the only O(n^2) piece of the pipeline. Both versions
return the raw sum

    S_j = sum_{i: y_i=1} sum_{l: y_l=0} exp(-|(x_i - x_l)/h|^2 / 2) (x_ij - x_lj) / h_j^2

Pairs with ``y_i = y_l = 1`` appear twice with opposite signs in the
average-derivative double sum and cancel exactly, so they are skipped.
"""

import numpy as np

from ._jit import USE_NUMBA, njit

_BLOCK_ELEMS = 1 << 20


@njit(cache=True, fastmath=False)
def _ade_pair_sum_jit(x, y, inv_h):
    n, d = x.shape
    out = np.zeros(d)
    diff = np.empty(d)
    for i in range(n):
        if y[i] != 1:
            continue
        for l in range(n):
            if y[l] != 0:
                continue
            q = 0.0
            for j in range(d):
                diff[j] = x[i, j] - x[l, j]
                u = diff[j] * inv_h[j]
                q += u * u
            k = np.exp(-0.5 * q)
            for j in range(d):
                out[j] += k * diff[j] * inv_h[j] * inv_h[j]
    return out


def _ade_pair_sum_numpy(x, y, inv_h):
    x1 = x[y == 1]
    x0 = x[y == 0]
    d = x.shape[1]
    out = np.zeros(d)
    if x1.size == 0 or x0.size == 0:
        return out
    step = max(1, _BLOCK_ELEMS // max(1, x0.shape[0] * d))
    for start in range(0, x1.shape[0], step):
        diff = x1[start:start + step, None, :] - x0[None, :, :]
        q = np.einsum("ilj,ilj->il", diff * inv_h, diff * inv_h)
        k = np.exp(-0.5 * q)
        out += np.einsum("il,ilj->j", k, diff) * inv_h * inv_h
    return out


def ade_pair_sum(x, y, h, *, use_numba=None):
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int64)
    inv_h = 1.0 / np.ascontiguousarray(h, dtype=np.float64)
    if USE_NUMBA if use_numba is None else use_numba:
        return _ade_pair_sum_jit(x, y, inv_h)
    return _ade_pair_sum_numpy(x, y, inv_h)

import os
import subprocess
import sys

import numpy as np
import pytest

from indexcvm._jit import HAS_NUMBA
from indexcvm._kernels import ade_pair_sum
from oracles import naive_ade

needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba not installed")


def sample(rng, n, d):
    return rng.uniform(-1, 1, (n, d)), (rng.uniform(size=n) < 0.4).astype(np.int64)


@needs_numba
@pytest.mark.parametrize("n, d", [(2, 1), (17, 1), (60, 3), (333, 5)])
def test_paths_agree(n, d):
    x, y = sample(np.random.default_rng(n * 10 + d), n, d)
    h = np.linspace(0.3, 0.6, d)
    a = ade_pair_sum(x, y, h, use_numba=True)
    b = ade_pair_sum(x, y, h, use_numba=False)
    assert a.shape == b.shape == (d,)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12 * np.abs(a).max())


def test_single_class_sum_is_zero():
    x = np.random.default_rng(1).normal(size=(30, 2))
    for label in (0, 1):
        y = np.full(30, label, dtype=np.int64)
        assert np.all(ade_pair_sum(x, y, np.ones(2), use_numba=False) == 0.0)
        if HAS_NUMBA:
            assert np.all(ade_pair_sum(x, y, np.ones(2), use_numba=True) == 0.0)


def test_matches_full_double_sum():
    from indexcvm import Dataset
    from indexcvm.index import AdeConfig, ade_estimate

    rng = np.random.default_rng(3)
    x, y = sample(rng, 40, 2)
    ds = Dataset(x, y, rng.normal(size=40))
    h = np.array([0.4, 0.5])
    est = ade_estimate(ds, AdeConfig(bandwidths=h), use_numba=False)
    np.testing.assert_allclose(est, naive_ade(x, y, h), rtol=1e-10)


def test_env_flag_selects_numpy_path():
    code = "from indexcvm import _jit; print(_jit.USE_NUMBA)"
    env = {**os.environ, "INDEXCVM_DISABLE_NUMBA": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
    env["INDEXCVM_DISABLE_NUMBA"] = ""
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == str(HAS_NUMBA)

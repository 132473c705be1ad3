import numpy as np
import pytest

from indexcvm import Dataset


def random_dataset(rng, n, d=2, *, p1=0.5, z_ties=False):
    """Continuous covariates and z; ``z_ties`` draws z from a handful of values."""
    xs = rng.uniform(-1.0, 1.0, size=(n, d))
    ys = (rng.uniform(size=n) < p1).astype(int)
    if ys.min() == ys.max():
        ys[0] = 1 - ys[0]
    zs = rng.integers(0, 4, size=n).astype(float) if z_ties else rng.normal(size=n)
    return Dataset(xs, ys, zs)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

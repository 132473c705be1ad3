import math

import numpy as np
import pytest

from indexcvm import (
    DataError,
    Dataset,
    Direction,
    EmptyCellError,
    assign_cells,
    build_equal_mass_cells,
    project_index,
    validate_cells,
)
from indexcvm.partition import Partition
from oracles import naive_partition_cells


def _ds(xs):
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    n = xs.shape[0]
    return Dataset(np.vstack([xs, xs]), [0] * n + [1] * n, np.zeros(2 * n))


@pytest.mark.parametrize(
    "x, beta, expected",
    [
        ((1, 2, 3), (1, 0, 0), 1.0),
        ((1, 1), (1 / math.sqrt(2), 1 / math.sqrt(2)), math.sqrt(2)),
        ((0, 0, 0), (0.6, 0, 0.8), 0.0),
    ],
)
def test_project_index(x, beta, expected):
    v = project_index(_ds([x]), Direction(beta))
    assert v[0] == pytest.approx(expected, abs=1e-15)


def test_project_index_dimension_mismatch():
    with pytest.raises(DataError, match="length"):
        project_index(_ds([(1, 2)]), Direction([1.0, 0.0, 0.0]))


def test_equal_mass_six_values():
    p = build_equal_mass_cells([1, 2, 3, 4, 5, 6], 3)
    np.testing.assert_array_equal(p.boundaries, [0, 2, 4, 6])
    cells = assign_cells([1, 2, 3, 4, 5, 6], p)
    assert np.bincount(cells).tolist() == [0, 2, 2, 2]


def test_single_cell():
    v = np.array([3.5, -1.0, 2.0])
    p = build_equal_mass_cells(v, 1)
    np.testing.assert_array_equal(p.boundaries, [-2.0, 3.5])
    assert assign_cells(v, p).tolist() == [1, 1, 1]


@pytest.mark.parametrize("values, m", [((1, 1, 1, 2), 3), ((1, 2), 3), ((1, 2, 2, 2, 2, 3), 3), ((1, 2), 0)])
def test_equal_mass_errors(values, m):
    with pytest.raises(DataError):
        build_equal_mass_cells(values, m)


@pytest.mark.parametrize("value, cell", [(2.0, 1), (2.5, 2), (6.0, 3), (1e-300, 1)])
def test_assign_cells_right_closed(value, cell):
    assert assign_cells([value], Partition([0, 2, 4, 6]))[0] == cell


@pytest.mark.parametrize("value", [0.0, -1.0, 6.0000001])
def test_assign_outside(value):
    with pytest.raises(DataError, match="outside"):
        assign_cells([value], Partition([0, 2, 4, 6]))


def test_validate_balanced_counts():
    cells = np.repeat([1, 2], 20)
    ys = np.tile(np.repeat([0, 1], 10), 2)
    counts = validate_cells(cells, ys, 2)
    assert counts.counts.tolist() == [[10, 10], [10, 10]]
    assert counts.totals == (20, 20)


def test_validate_reports_first_empty_class_cell():
    cells = [1, 1, 2, 2, 2, 2]
    ys = [0, 0, 0, 1, 1, 1]
    with pytest.raises(EmptyCellError) as info:
        validate_cells(cells, ys, 2)
    assert (info.value.j, info.value.k) == (1, 1)
    assert "reduce m" in str(info.value)


def test_validate_single_cell():
    counts = validate_cells([1] * 5, [0, 1, 1, 0, 1], 1)
    assert counts.counts.tolist() == [[2], [3]]


def test_validate_allow_single_class():
    counts = validate_cells([1, 1, 2, 2, 2, 2], [0, 0, 0, 1, 1, 1], 2, allow_single_class=True)
    assert counts.counts.tolist() == [[2, 1], [0, 3]]
    with pytest.raises(EmptyCellError):
        validate_cells([1, 1, 1], [0, 1, 1], 2, allow_single_class=True)


def test_partition_properties_on_random_data():
    rng = np.random.default_rng(7)
    for _ in range(300):
        n = int(rng.integers(2, 60))
        m = int(rng.integers(1, n + 1))
        v = rng.normal(size=n)
        ys = rng.integers(0, 2, n)
        p = build_equal_mass_cells(v, m)
        cells = assign_cells(v, p)
        assert cells.tolist() == naive_partition_cells(v.tolist(), m)
        sizes = np.bincount(cells, minlength=m + 1)[1:]
        assert np.max(np.abs(sizes - n / m)) <= 1
        counts = validate_cells(cells, ys, m, allow_single_class=True)
        assert counts.counts.sum(axis=1).tolist() == [int((ys == 0).sum()), int((ys == 1).sum())]
        assert sum(counts.totals) == n


def test_translation_invariance_with_dyadic_values():
    rng = np.random.default_rng(8)
    for _ in range(200):
        n = int(rng.integers(5, 50))
        m = int(rng.integers(1, n // 2 + 1))
        v = rng.permutation(n).astype(float) / 8.0
        p = build_equal_mass_cells(v, m)
        c = float(rng.integers(-100, 100)) / 4.0
        assert assign_cells(v + c, Partition(p.boundaries + c)).tolist() == assign_cells(v, p).tolist()


def test_negated_direction_mirrors_cells_when_m_divides_n():
    rng = np.random.default_rng(9)
    for _ in range(300):
        m = int(rng.integers(1, 8))
        n = m * int(rng.integers(1, 10))
        v = rng.normal(size=n)
        up = assign_cells(v, build_equal_mass_cells(v, m))
        down = assign_cells(-v, build_equal_mass_cells(-v, m))
        assert (up == m + 1 - down).all()


def test_mirror_fails_when_m_does_not_divide_n():
    # n=5, m=2: sizes (3, 2) in both directions, so the mirror image has sizes (2, 3)
    v = np.arange(5.0)
    up = assign_cells(v, build_equal_mass_cells(v, 2))
    down = assign_cells(-v, build_equal_mass_cells(-v, 2))
    assert np.bincount(up).tolist() == [0, 3, 2] and np.bincount(down).tolist() == [0, 3, 2]
    assert not (up == 3 - down).all()

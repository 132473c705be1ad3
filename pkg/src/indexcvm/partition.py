"""Strip partition of the covariate space along an index direction.

Cells are ``A_k = {x : a_{k-1} < x @ beta <= a_k}`` for ``k = 1..m``; cell ids
are 1-based throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset, Direction
from .errors import DataError, EmptyCellError


@dataclass(frozen=True, eq=False)
class Partition:
    boundaries: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.boundaries, dtype=float)
        if b.ndim != 1 or b.size < 2:
            raise DataError("a partition needs at least two boundaries")
        if not np.all(np.diff(b) > 0):
            raise DataError("partition boundaries must be strictly increasing")
        b = b.copy()
        b.setflags(write=False)
        object.__setattr__(self, "boundaries", b)

    @property
    def m(self) -> int:
        return self.boundaries.size - 1


@dataclass(frozen=True, eq=False)
class CellCounts:
    """``counts[j, k-1]`` is the number of class-``j`` observations in cell ``k``."""

    counts: np.ndarray

    @property
    def m(self) -> int:
        return self.counts.shape[1]

    @property
    def totals(self) -> tuple[int, int]:
        return int(self.counts[0].sum()), int(self.counts[1].sum())

    @property
    def cell_sizes(self) -> np.ndarray:
        return self.counts.sum(axis=0)


def project_index(ds: Dataset, direction: Direction) -> np.ndarray:
    """Index values ``x_i @ beta``, accumulated left to right over coordinates."""
    if direction.d != ds.d:
        raise DataError(f"direction has length {direction.d} but the data have d={ds.d} covariates")
    beta = direction.beta
    v = ds.xs[:, 0] * beta[0]
    for j in range(1, ds.d):
        v = v + ds.xs[:, j] * beta[j]
    return v


def build_equal_mass_cells(index_values, m: int) -> Partition:
    """Partition the index line into ``m`` cells of (nearly) equal empirical mass.

    The interior boundary ``a_k`` is the ``ceil(k n / m)``-th order statistic,
    ``a_0 = min - 1`` and ``a_m = max``. With distinct values the cell sizes
    differ by at most one.
    """
    v = np.sort(np.asarray(index_values, dtype=float))
    n = v.size
    if m < 1:
        raise DataError(f"m must be at least 1, got {m}")
    if m > n:
        raise DataError(f"m={m} cells requested for only n={n} observations")
    if np.unique(v).size < m:
        raise DataError(f"fewer than m={m} distinct index values; cell boundaries would collide")
    ranks = [(k * n + m - 1) // m for k in range(1, m)]
    bounds = np.empty(m + 1)
    bounds[0] = v[0] - 1.0
    bounds[1:m] = v[np.array(ranks, dtype=np.int64) - 1]
    bounds[m] = v[-1]
    if not np.all(np.diff(bounds) > 0):
        raise DataError(f"tied index values make equal-mass boundaries collide at m={m}")
    return Partition(bounds)


def assign_cells(index_values, partition: Partition) -> np.ndarray:
    """Cell id ``k`` (1-based) with ``a_{k-1} < v <= a_k`` for every value."""
    v = np.asarray(index_values, dtype=float)
    cells = np.searchsorted(partition.boundaries, v, side="left")
    outside = (cells < 1) | (cells > partition.m)
    if outside.any():
        i = int(np.flatnonzero(outside)[0])
        raise DataError(
            f"index value {v[i]!r} of observation {i} lies outside "
            f"({partition.boundaries[0]!r}, {partition.boundaries[-1]!r}]"
        )
    return cells.astype(np.int64)


def validate_cells(cell_ids, ys, m: int, *, allow_single_class: bool = False) -> CellCounts:
    """Count observations per (class, cell) and check that no count is zero.

    With ``allow_single_class`` a cell may hold only one class (the statistic
    stays well defined); only a cell with no observations at all is rejected.
    """
    cell_ids = np.asarray(cell_ids, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    if cell_ids.size and (cell_ids.min() < 1 or cell_ids.max() > m):
        raise DataError(f"cell ids must lie in 1..{m}")
    counts = np.bincount(ys * m + (cell_ids - 1), minlength=2 * m).reshape(2, m)
    for k in range(1, m + 1):
        for j in (0, 1):
            if counts[j, k - 1] == 0 and (not allow_single_class or counts[1 - j, k - 1] == 0):
                raise EmptyCellError(j, k, m)
    counts.setflags(write=False)
    return CellCounts(counts)

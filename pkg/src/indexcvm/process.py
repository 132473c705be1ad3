"""Within-cell rank transform, the normalised two-sample process and its functionals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset, Direction, class_counts
from .errors import DataError, NonPositiveNormalizerError
from .index import AdeConfig, estimate_direction
from .limit import p_value
from .partition import (
    CellCounts,
    assign_cells,
    build_equal_mass_cells,
    project_index,
    validate_cells,
)

NORMALIZER_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class TransformedSample:
    """Pooled within-cell empirical CDF of ``z`` evaluated at each observation.

    ``t_i = rank_i / size_i`` where ``rank_i`` counts the observations in the
    same cell with strictly smaller ``z`` and ``size_i`` is the pooled cell
    size. Numerators and denominators are kept as integers.
    """

    cell_ids: np.ndarray
    ys: np.ndarray
    rank: np.ndarray
    size: np.ndarray

    @property
    def t(self) -> np.ndarray:
        # correctly rounded division: equal fractions give equal floats
        return self.rank / self.size


def transform_sample(ds: Dataset, cell_ids, counts: CellCounts) -> TransformedSample:
    cell_ids = np.asarray(cell_ids, dtype=np.int64)
    zs = ds.zs
    rank = np.empty(ds.n, dtype=np.int64)
    order = np.argsort(cell_ids, kind="stable")
    starts = np.searchsorted(cell_ids[order], np.arange(1, counts.m + 2), side="left")
    for k in range(counts.m):
        idx = order[starts[k]:starts[k + 1]]
        zk = zs[idx]
        rank[idx] = np.searchsorted(np.sort(zk), zk, side="left")
    size = counts.cell_sizes[cell_ids - 1]
    return TransformedSample(cell_ids, ds.ys, rank, size)


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Left-continuous step function on ``[0, 1]``.

    ``knots`` is ``0 = u_0 < u_1 < ... < u_J = 1`` and ``values[q]`` is the value
    on ``(u_q, u_{q+1}]``; the value at ``u = 0`` is 0.
    """

    knots: np.ndarray
    values: np.ndarray

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        q = np.searchsorted(self.knots, u, side="left") - 1
        out = self.values[np.clip(q, 0, self.values.size - 1)]
        return np.where(u <= 0.0, 0.0, out)


def _class_t(ts: TransformedSample, j: int) -> np.ndarray:
    return np.sort(ts.t[ts.ys == j])


def gamma_hat(ts: TransformedSample, j: int) -> StepFunction:
    """Empirical CDF ``u -> #{i: y_i = j, t_i < u} / n_j`` of the transformed class-``j`` values."""
    tj = _class_t(ts, j)
    if tj.size == 0:
        raise DataError(f"class {j} has no observations")
    knots = np.unique(np.concatenate(([0.0], tj, [1.0])))
    values = np.searchsorted(tj, knots[:-1], side="right") / tj.size
    return StepFunction(knots, values)


def normalizer(counts: CellCounts) -> float:
    """Square root of the variance correction of the test process."""
    n0, n1 = counts.totals
    n = n0 + n1
    c0 = counts.counts[0]
    c1 = counts.counts[1]
    terms = (c0 / n0 - c1 / n1) ** 2 / (c0 + c1)
    # fsum is order independent, so relabelling cells cannot change the result
    inner = 1.0 - (n0 * n1 / n) * math.fsum(terms.tolist())
    if inner <= NORMALIZER_FLOOR:
        raise NonPositiveNormalizerError(
            f"variance correction {inner!r} is not positive; the partition separates the classes"
        )
    return math.sqrt(inner)


@dataclass(frozen=True, eq=False)
class GammaProcess(StepFunction):
    normalizer: float = 1.0


def gamma_process(ts: TransformedSample, counts: CellCounts) -> GammaProcess:
    n0, n1 = counts.totals
    n = n0 + n1
    t0 = _class_t(ts, 0)
    t1 = _class_t(ts, 1)
    knots = np.unique(np.concatenate(([0.0], t0, t1, [1.0])))
    left = knots[:-1]
    diff = np.searchsorted(t0, left, side="right") / n0 - np.searchsorted(t1, left, side="right") / n1
    norm = normalizer(counts)
    values = math.sqrt(n0 * n1 / n) * diff / norm
    return GammaProcess(knots, values, norm)


def cvm_statistic(g: StepFunction) -> float:
    """Exact integral of the squared step function over ``[0, 1]``."""
    return math.fsum((g.values * g.values * np.diff(g.knots)).tolist())


def ks_statistic(g: StepFunction) -> float:
    """Supremum of ``|g|`` over ``[0, 1]``."""
    return float(np.max(np.abs(g.values), initial=0.0))


@dataclass(frozen=True, eq=False)
class TestResult:
    __test__ = False

    t_n: float
    ks_n: float
    p_value_cvm: float
    m: int
    counts: np.ndarray
    normalizer: float
    direction: np.ndarray
    mode: str
    boundaries: np.ndarray = field(repr=False, default=None)

    @property
    def n0(self) -> int:
        return int(self.counts[0].sum())

    @property
    def n1(self) -> int:
        return int(self.counts[1].sum())

    def to_dict(self) -> dict:
        return {
            "t_n": self.t_n,
            "ks_n": self.ks_n,
            "p_value": self.p_value_cvm,
            "m": self.m,
            "n0": self.n0,
            "n1": self.n1,
            "normalizer": self.normalizer,
            "mode": self.mode,
            "direction": [float(b) for b in self.direction],
            "counts": [[int(c) for c in row] for row in self.counts],
        }


def run_test(
    ds: Dataset,
    m: int,
    direction: Direction | None = None,
    *,
    ade: AdeConfig | None = None,
    allow_single_class: bool = False,
) -> TestResult:
    """Test whether ``z`` explains ``y`` beyond the index ``x @ beta``.

    Parameters
    ----------
    ds : Dataset
    m : int
        Number of equal-mass cells along the index.
    direction : Direction, optional
        Known index direction ("oracle" mode). When omitted the direction is
        estimated by the density-weighted average derivative tuned by ``ade``.
    allow_single_class : bool
        Accept cells that contain only one class instead of raising
        :class:`~indexcvm.errors.EmptyCellError`.

    Returns
    -------
    TestResult
        Cramér-von Mises statistic with its asymptotic p-value, the
        Kolmogorov-Smirnov statistic (no p-value) and diagnostics.
    """
    n0, n1 = class_counts(ds)
    if n0 == 0 or n1 == 0:
        raise DataError(f"both classes must be present (n0={n0}, n1={n1})")
    if direction is None:
        mode = "estimate"
        direction = estimate_direction(ds, ade)
    else:
        mode = "oracle"
    v = project_index(ds, direction)
    part = build_equal_mass_cells(v, m)
    cells = assign_cells(v, part)
    counts = validate_cells(cells, ds.ys, m, allow_single_class=allow_single_class)
    ts = transform_sample(ds, cells, counts)
    g = gamma_process(ts, counts)
    t_n = cvm_statistic(g)
    return TestResult(
        t_n=t_n,
        ks_n=ks_statistic(g),
        p_value_cvm=p_value(t_n),
        m=m,
        counts=counts.counts,
        normalizer=g.normalizer,
        direction=direction.beta,
        mode=mode,
        boundaries=part.boundaries,
    )

"""Monte Carlo experiment grids: size/power tables and PP-plot data."""

from __future__ import annotations

import csv
import hashlib
import itertools
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError
from .index import AdeConfig
from .limit import cvm_limit_cdf, default_table
from .simulation import MODES, DgpConfig, replicate

log = logging.getLogger(__name__)

MAX_INVALID_FRACTION = 0.01
TABLE_COLUMNS = ("d", "m", "sigma", "theta", "mode", "rate", "mc_se", "invalid_count")


@dataclass(frozen=True)
class ExperimentGrid:
    d: tuple[int, ...]
    sigma: tuple[float, ...]
    theta: tuple[float, ...]
    m: tuple[int, ...]
    modes: tuple[str, ...] = ("oracle", "estimate")
    n: int = 1000
    reps: int = 2000
    level: float = 0.05
    seed: int = 0
    ade: AdeConfig = field(default_factory=AdeConfig)
    allow_single_class: bool = True

    def __post_init__(self):
        for name in ("d", "sigma", "theta", "m", "modes"):
            value = tuple(getattr(self, name))
            if not value:
                raise DataError(f"grid list {name!r} is empty")
            object.__setattr__(self, name, value)
        bad = [mo for mo in self.modes if mo not in MODES]
        if bad:
            raise DataError(f"unknown mode(s) {bad}; expected a subset of {MODES}")
        if self.reps < 1:
            raise DataError(f"reps must be >= 1, got {self.reps}")
        if not 0.0 < self.level < 1.0:
            raise DataError(f"level must lie in (0, 1), got {self.level}")

    def cells(self):
        for d, m, sigma, theta, mode in itertools.product(self.d, self.m, self.sigma, self.theta, self.modes):
            yield GridCell(d, m, float(sigma), float(theta), mode)


@dataclass(frozen=True, order=True)
class GridCell:
    d: int
    m: int
    sigma: float
    theta: float
    mode: str

    def key(self, n: int) -> int:
        """Stable 63-bit stream key; a cell's draws do not depend on the rest of the grid."""
        text = f"d={self.d}|m={self.m}|sigma={self.sigma!r}|theta={self.theta!r}|mode={self.mode}|n={n}"
        return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "big") >> 1


@dataclass(frozen=True)
class TableRow:
    cell: GridCell
    reps: int
    rejections: int
    invalid: int
    aborted: bool = False

    @property
    def rate(self) -> float:
        return math.nan if self.aborted else self.rejections / self.reps

    @property
    def mc_se(self) -> float:
        r = self.rate
        return math.sqrt(r * (1.0 - r) / self.reps)


RejectionTable = list[TableRow]


def _run_chunk(args):
    cell, grid, key, reps = args
    cfg = DgpConfig(cell.d, cell.sigma, cell.theta, grid.n)
    out = []
    for r in reps:
        rep = replicate(cfg, cell.m, cell.mode, grid.seed, grid.level, key=(key, r), ade=grid.ade,
                        allow_single_class=grid.allow_single_class)
        out.append((r, rep.valid, rep.reject, rep.t_n))
    return out


def _replications(cell, grid, workers, pool):
    key = cell.key(grid.n)
    if pool is None:
        rows = _run_chunk((cell, grid, key, range(grid.reps)))
    else:
        size = max(1, grid.reps // (4 * workers))
        chunks = [(cell, grid, key, range(s, min(s + size, grid.reps))) for s in range(0, grid.reps, size)]
        rows = [row for part in pool.map(_run_chunk, chunks) for row in part]
    rows.sort(key=lambda row: row[0])
    return rows


def _checkpoint_path(directory, cell, grid):
    payload = json.dumps([asdict(cell), grid.n, grid.reps, grid.level, grid.seed, repr(grid.ade),
                          grid.allow_single_class], sort_keys=True)
    digest = hashlib.blake2b(payload.encode(), digest_size=10).hexdigest()
    return Path(directory) / f"cell-{digest}.json"


def run_grid(grid: ExperimentGrid, *, workers: int = 1, checkpoint_dir=None) -> RejectionTable:
    """Estimate rejection rates for every cell of ``grid``.

    Replication ``r`` of cell ``c`` draws from the stream keyed by
    ``(grid.seed, c.key, r)``, so results do not depend on ``workers`` or on
    which other cells are in the grid. A cell whose invalid replications
    exceed 1% of ``reps`` is marked aborted (rate NaN). With
    ``checkpoint_dir`` each finished cell is stored and reused on a re-run.
    """
    table = []
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for cell in grid.cells():
            ckpt = _checkpoint_path(checkpoint_dir, cell, grid) if checkpoint_dir else None
            if ckpt is not None and ckpt.exists():
                saved = json.loads(ckpt.read_text())
                table.append(TableRow(cell, saved["reps"], saved["rejections"], saved["invalid"], saved["aborted"]))
                log.info("resumed %s from %s", cell, ckpt)
                continue
            reps = _replications(cell, grid, workers, pool)
            invalid = sum(1 for _, valid, _, _ in reps if not valid)
            rejections = sum(1 for _, _, reject, _ in reps if reject)
            aborted = invalid > MAX_INVALID_FRACTION * grid.reps
            if aborted:
                log.warning("aborting %s: %d of %d replications invalid", cell, invalid, grid.reps)
            row = TableRow(cell, grid.reps, rejections, invalid, aborted)
            if ckpt is not None:
                ckpt.parent.mkdir(parents=True, exist_ok=True)
                tmp = ckpt.with_suffix(".tmp")
                tmp.write_text(json.dumps({"reps": row.reps, "rejections": rejections, "invalid": invalid,
                                           "aborted": aborted}))
                os.replace(tmp, ckpt)
            log.info("%s rate=%.3f invalid=%d", cell, row.rate, invalid)
            table.append(row)
    finally:
        if pool is not None:
            pool.shutdown()
    return table


def null_statistics(d, sigma, m, mode, n, reps, seed, *, ade=None, workers=1, allow_single_class=True):
    """``reps`` valid values of the statistic under the null; invalid replications are skipped."""
    grid = ExperimentGrid((d,), (sigma,), (0.0,), (m,), (mode,), n=n, reps=reps, seed=seed,
                          ade=ade or AdeConfig(), allow_single_class=allow_single_class)
    cell = next(grid.cells())
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        rows = _replications(cell, grid, workers, pool)
    finally:
        if pool is not None:
            pool.shutdown()
    return np.array([t for _, valid, _, t in rows if valid])


def pp_pairs(statistics) -> np.ndarray:
    """Pairs ``(F(T_(i)), i/R)`` for the sorted statistics, ``F`` the limit CDF."""
    s = np.sort(np.asarray(statistics, dtype=float))
    r = s.size
    if r == 0:
        raise DataError("no statistics to compare")
    return np.column_stack([np.atleast_1d(cvm_limit_cdf(s)), np.arange(1, r + 1) / r])


def pp_plot_data(d, sigma, m, mode, n, reps, seed, *, ade=None, workers=1) -> np.ndarray:
    """PP-plot pairs comparing the null distribution of the statistic with its limit."""
    if reps < 1:
        raise DataError(f"reps must be >= 1, got {reps}")
    return pp_pairs(null_statistics(d, sigma, m, mode, n, reps, seed, ade=ade, workers=workers))


def pp_gap(pairs) -> float:
    """Largest vertical distance between the pairs and the diagonal."""
    pairs = np.asarray(pairs)
    return float(np.max(np.abs(pairs[:, 0] - pairs[:, 1])))


def ks_distance(statistics) -> float:
    """Kolmogorov distance between the empirical CDF of ``statistics`` and the limit CDF."""
    s = np.sort(np.asarray(statistics, dtype=float))
    r = s.size
    f = np.atleast_1d(cvm_limit_cdf(s))
    i = np.arange(1, r + 1)
    return float(max(np.max(i / r - f), np.max(f - (i - 1) / r)))


def calibrated_statistics(reps, rng) -> np.ndarray:
    """Draws from the limit law itself (inverse CDF at uniforms); a sanity input for PP plots."""
    return default_table().quantiles(rng.uniform(1e-9, 1.0 - 1e-9, reps), polish=False)


def _fmt(v):
    return "nan" if isinstance(v, float) and math.isnan(v) else f"{v:g}"


def emit_table_csv(table: RejectionTable, path, *, pivot: bool = False):
    """Write a rejection table as CSV.

    Long format has one row per grid cell with columns
    ``d,m,sigma,theta,mode,rate,mc_se,invalid_count``. ``pivot=True`` lays the
    rates out like the published tables. A single-theta (size) table gets one
    row per ``(d, sigma, theta)`` and one column per ``(mode, m)``; a table
    spanning several thetas (power) gets one row per ``(d, m, sigma)`` and one
    column per theta.
    """
    rows = sorted(table, key=lambda r: r.cell)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if not pivot:
            w.writerow(TABLE_COLUMNS)
            for r in rows:
                c = r.cell
                w.writerow([c.d, c.m, _fmt(c.sigma), _fmt(c.theta), c.mode,
                            "nan" if r.aborted else f"{r.rate:.3f}",
                            "nan" if r.aborted else f"{r.mc_se:.4f}", r.invalid])
            return
        modes = [mo for mo in MODES if any(r.cell.mode == mo for r in rows)]
        thetas = sorted({r.cell.theta for r in rows})
        if len(thetas) > 1:
            # power layout: one row per (d, m, sigma), one column per theta
            columns = [(mo, th) for mo in modes for th in thetas]
            prefix = len(modes) > 1
            w.writerow(["d", "m", "sigma"] + [f"{mo}_theta{_fmt(th)}" if prefix else f"theta{_fmt(th)}"
                                              for mo, th in columns])
            lookup = {(r.cell.d, r.cell.m, r.cell.sigma, r.cell.mode, r.cell.theta): r for r in rows}
            keys = sorted({(r.cell.d, r.cell.m, r.cell.sigma) for r in rows})
        else:
            # size layout: one row per (d, sigma, theta), one column per (mode, m)
            ms = sorted({r.cell.m for r in rows})
            columns = [(mo, m) for mo in modes for m in ms]
            w.writerow(["d", "sigma", "theta"] + [f"{mo}_m{m}" for mo, m in columns])
            lookup = {(r.cell.d, r.cell.sigma, r.cell.theta, r.cell.mode, r.cell.m): r for r in rows}
            keys = sorted({(r.cell.d, r.cell.sigma, r.cell.theta) for r in rows})
        for key in keys:
            line = [key[0]] + [_fmt(v) if isinstance(v, float) else v for v in key[1:]]
            for col in columns:
                r = lookup.get(key + col)
                line.append("" if r is None else ("nan" if r.aborted else f"{r.rate:.3f}"))
            w.writerow(line)


def emit_pairs_csv(pairs, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["asymptotic_cdf", "empirical_cdf"])
        for a, b in pairs:
            w.writerow([repr(float(a)), repr(float(b))])

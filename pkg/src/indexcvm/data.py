"""Observation data model and CSV ingestion."""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from os import PathLike

import numpy as np

from .errors import DataError

DIRECTION_NORM_TOL = 1e-12


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """``n`` observations of a covariate vector ``x``, a binary label ``y`` and a scalar ``z``.

    Arrays are copied and made read-only on construction.
    """

    xs: np.ndarray
    ys: np.ndarray
    zs: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        if xs.ndim == 1:
            xs = xs[:, None]
        if xs.ndim != 2 or xs.shape[1] < 1:
            raise DataError(f"xs must be an n x d matrix with d >= 1, got shape {xs.shape}")
        ys_raw = np.asarray(self.ys)
        zs = np.asarray(self.zs, dtype=float)
        n = xs.shape[0]
        if ys_raw.shape != (n,) or zs.shape != (n,):
            raise DataError(
                f"length mismatch: xs has {n} rows, ys has shape {ys_raw.shape}, zs has shape {zs.shape}"
            )
        if n < 2:
            raise DataError(f"need at least 2 observations, got {n}")
        bad = ~np.isin(ys_raw, (0, 1))
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise DataError(f"y must be 0 or 1; observation {i} has y={ys_raw[i]!r}")
        for name, arr in (("xs", xs), ("zs", zs)):
            nonfinite = ~np.isfinite(arr)
            if nonfinite.any():
                i = int(np.argwhere(nonfinite)[0][0])
                raise DataError(f"{name} has a non-finite entry at observation {i}")
        object.__setattr__(self, "xs", _frozen(xs, float))
        object.__setattr__(self, "ys", _frozen(ys_raw, np.int64))
        object.__setattr__(self, "zs", _frozen(zs, float))

    @property
    def n(self) -> int:
        return self.xs.shape[0]

    @property
    def d(self) -> int:
        return self.xs.shape[1]


@dataclass(frozen=True, eq=False)
class Direction:
    """Unit vector defining the single index ``x @ beta``."""

    beta: np.ndarray

    def __post_init__(self):
        beta = np.asarray(self.beta, dtype=float).ravel()
        if beta.size < 1 or not np.all(np.isfinite(beta)):
            raise DataError("direction must be a non-empty finite vector")
        norm = math.sqrt(math.fsum(b * b for b in beta))
        if abs(norm - 1.0) > DIRECTION_NORM_TOL:
            raise DataError(f"direction must have unit norm, got |beta| = {norm!r}")
        object.__setattr__(self, "beta", _frozen(beta, float))

    @property
    def d(self) -> int:
        return self.beta.size

    @classmethod
    def normalized(cls, v) -> "Direction":
        v = np.asarray(v, dtype=float).ravel()
        norm = math.sqrt(math.fsum(b * b for b in v))
        if norm == 0.0:
            raise DataError("cannot normalize the zero vector")
        return cls(v / norm)

    def __neg__(self) -> "Direction":
        return Direction(-self.beta)


def class_counts(ds: Dataset) -> tuple[int, int]:
    """Return ``(n0, n1)``, the number of observations with ``y == 0`` and ``y == 1``."""
    n1 = int(ds.ys.sum())
    return ds.n - n1, n1


def _covariate_columns(header, x_prefix):
    pat = re.compile(rf"^{re.escape(x_prefix)}(\d+)$")
    found = {}
    for col, name in enumerate(header):
        mt = pat.match(name.strip())
        if mt:
            found[int(mt.group(1))] = col
    if not found:
        raise DataError(f"missing covariate columns: no column named {x_prefix}1, {x_prefix}2, ...")
    d = len(found)
    missing = [f"{x_prefix}{j}" for j in range(1, d + 1) if j not in found]
    if missing:
        raise DataError(f"missing covariate columns: {', '.join(missing)}")
    return [found[j] for j in range(1, d + 1)]


def load_csv(
    path: str | PathLike,
    *,
    x_prefix: str = "x",
    y_col: str = "y",
    z_col: str = "z",
) -> Dataset:
    """Read a dataset from a CSV file with a header row.

    Covariates are the columns ``{x_prefix}1 .. {x_prefix}d``; the label and the
    tested variable are ``y_col`` and ``z_col``. Errors name the offending data
    row (1-based, header excluded) and column.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        xcols = _covariate_columns(header, x_prefix)
        cols = {}
        for name in (y_col, z_col):
            if name not in header:
                raise DataError(f"missing column {name!r}")
            cols[name] = header.index(name)

        xs, ys, zs = [], [], []
        for row_no, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise DataError(f"row {row_no}: expected {len(header)} fields, got {len(row)}")

            def num(col):
                raw = row[col].strip()
                try:
                    v = float(raw)
                except ValueError:
                    raise DataError(
                        f"row {row_no}, column {header[col]!r}: non-numeric value {raw!r}"
                    ) from None
                if not math.isfinite(v):
                    raise DataError(f"row {row_no}, column {header[col]!r}: non-finite value {raw!r}")
                return v

            xs.append([num(c) for c in xcols])
            y = num(cols[y_col])
            if y not in (0.0, 1.0):
                raise DataError(f"row {row_no}, column {y_col!r}: y must be 0 or 1, got {row[cols[y_col]].strip()!r}")
            ys.append(int(y))
            zs.append(num(cols[z_col]))

    if len(ys) < 2:
        raise DataError(f"{path}: need at least 2 data rows, got {len(ys)}")
    return Dataset(np.array(xs, dtype=float), np.array(ys), np.array(zs))


def write_csv(ds: Dataset, path: str | PathLike, *, x_prefix: str = "x", y_col: str = "y", z_col: str = "z"):
    """Write ``ds`` in the format read by :func:`load_csv`.

    Floats use the shortest round-tripping decimal, so ``load_csv(write_csv(ds))``
    reproduces ``ds`` bit for bit.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"{x_prefix}{j}" for j in range(1, ds.d + 1)] + [y_col, z_col])
        for x, y, z in zip(ds.xs, ds.ys, ds.zs):
            w.writerow([repr(float(v)) for v in x] + [int(y), repr(float(z))])

"""Data-generating process of the simulation study and single replications.

    X ~ Uniform(-1, 1)^d,  U, V ~ N(0, 1) independent,
    Z = exp(X @ 1_d) + (1 + |X @ 1_d|)^sigma U,
    Y = 1{X @ 1_d + theta U > V}.

The null hypothesis holds exactly when ``theta == 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .data import Dataset, Direction
from .errors import DataError, EmptyCellError, NonPositiveNormalizerError, UnidentifiedDirectionError
from .index import AdeConfig
from .process import run_test

MODES = ("oracle", "estimate")
_INVALID = (EmptyCellError, NonPositiveNormalizerError, UnidentifiedDirectionError)


@dataclass(frozen=True)
class DgpConfig:
    d: int
    sigma: float
    theta: float
    n: int = 1000

    def __post_init__(self):
        if self.d < 1:
            raise DataError(f"d must be >= 1, got {self.d}")
        if self.n < 2:
            raise DataError(f"n must be >= 2, got {self.n}")
        if not self.sigma >= 0:
            raise DataError(f"sigma must be >= 0, got {self.sigma}")


def stream(seed: int, *key: int) -> np.random.Generator:
    """Counter-based Philox stream keyed by ``(seed, *key)``.

    Distinct keys give statistically independent streams, whatever order
    or process they are consumed in.
    """
    ss = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def open_uniforms(rng: np.random.Generator, size) -> np.ndarray:
    """Uniforms on the open interval (0, 1) with 53 random bits each."""
    raw = rng.bit_generator.random_raw(size)
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53


def draw_sample(cfg: DgpConfig, rng: np.random.Generator) -> Dataset:
    # per observation: d coordinates of X, then U, then V
    u = open_uniforms(rng, (cfg.n, cfg.d + 2))
    x = 2.0 * u[:, : cfg.d] - 1.0
    big_u = ndtri(u[:, cfg.d])
    big_v = ndtri(u[:, cfg.d + 1])
    s = x[:, 0].copy()
    for j in range(1, cfg.d):
        s += x[:, j]
    z = np.exp(s) + (1.0 + np.abs(s)) ** cfg.sigma * big_u
    y = (s + cfg.theta * big_u > big_v).astype(np.int64)
    return Dataset(x, y, z)


def oracle_direction(cfg: DgpConfig) -> Direction:
    return Direction(np.full(cfg.d, 1.0 / math.sqrt(cfg.d)))


@dataclass(frozen=True)
class Replication:
    valid: bool
    reject: bool
    t_n: float
    p_value: float
    reason: str = ""


def replicate(
    cfg: DgpConfig,
    m: int,
    mode: str,
    seed: int,
    level: float = 0.05,
    *,
    key: tuple[int, ...] = (),
    ade: AdeConfig | None = None,
    allow_single_class: bool = True,
) -> Replication:
    """Draw one sample from the stream ``(seed, *key)`` and run the test on it.

    Pipeline failures that make the statistic undefined (empty cell,
    degenerate normaliser, unidentified direction) are returned as invalid
    replications rather than raised.
    """
    if mode not in MODES:
        raise DataError(f"mode must be one of {MODES}, got {mode!r}")
    ds = draw_sample(cfg, stream(seed, *key))
    direction = oracle_direction(cfg) if mode == "oracle" else None
    try:
        res = run_test(ds, m, direction, ade=ade, allow_single_class=allow_single_class)
    except _INVALID as exc:
        return Replication(False, False, math.nan, math.nan, type(exc).__name__)
    return Replication(True, res.p_value_cvm < level, res.t_n, res.p_value_cvm)

"""Distribution-free test of whether ``z`` explains a binary ``y`` beyond a single index ``x @ beta``.

Observations are split into strips of equal mass along the index, ``z`` is
replaced by its within-strip pooled empirical CDF, and the two class-wise
distributions of those values are compared by a normalised two-sample
Cramér-von Mises statistic whose null limit is ``int_0^1 B(u)^2 du``.
"""

from .data import Dataset, Direction, class_counts, load_csv, write_csv
from .errors import (
    ConfigError,
    DataError,
    EmptyCellError,
    IndexCvmError,
    NonPositiveNormalizerError,
    UnidentifiedDirectionError,
)
from .index import AdeConfig, ade_estimate, default_bandwidths, estimate_direction, round_to_grid
from .limit import cvm_limit_cdf, cvm_limit_quantile, p_value
from .partition import assign_cells, build_equal_mass_cells, project_index, validate_cells
from .process import (
    TestResult,
    cvm_statistic,
    gamma_hat,
    gamma_process,
    ks_statistic,
    normalizer,
    run_test,
    transform_sample,
)

__version__ = "0.1.0"

__all__ = [
    "AdeConfig", "ConfigError", "DataError", "Dataset", "Direction", "EmptyCellError", "IndexCvmError",
    "NonPositiveNormalizerError", "TestResult", "UnidentifiedDirectionError", "ade_estimate", "assign_cells",
    "build_equal_mass_cells", "class_counts", "cvm_limit_cdf", "cvm_limit_quantile", "cvm_statistic",
    "default_bandwidths", "estimate_direction", "gamma_hat", "gamma_process", "ks_statistic", "load_csv",
    "normalizer", "p_value", "project_index", "round_to_grid", "run_test", "transform_sample",
    "validate_cells", "write_csv",
]

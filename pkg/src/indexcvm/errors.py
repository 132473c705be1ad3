"""Exception hierarchy. Each class maps to one CLI exit code."""


class IndexCvmError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class DataError(IndexCvmError, ValueError):
    """Invalid input data (bad CSV cell, non-binary label, too few rows...)."""

    exit_code = 2


class NonPositiveNormalizerError(DataError):
    """The variance correction of the test process is (numerically) zero."""


class EmptyCellError(IndexCvmError):
    """Some class has no observation in some cell of the partition."""

    exit_code = 3

    def __init__(self, j, k, m):
        self.j = j
        self.k = k
        self.m = m
        super().__init__(
            f"EmptyCell(j={j}, k={k}): class {j} has no observation in cell {k} of {m}; "
            f"m is too large for this sample, reduce m (or pass --auto-shrink-m)"
        )


class UnidentifiedDirectionError(IndexCvmError):
    """The average-derivative estimate is the zero vector."""

    exit_code = 4


class ConfigError(IndexCvmError):
    """Malformed experiment configuration."""

    exit_code = 5

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"config key {key!r}: {message}")

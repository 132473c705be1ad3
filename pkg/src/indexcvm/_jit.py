"""Numba switch.

Set ``INDEXCVM_DISABLE_NUMBA=1`` to force the pure-numpy kernels (useful for
debugging and for comparing both paths in ``benchmarks/``).
"""

import os

_DISABLED = os.environ.get("INDEXCVM_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    from numba import njit as _njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and not _DISABLED


def njit(*args, **kwargs):
    """``numba.njit`` when numba is usable, otherwise an identity decorator."""
    if HAS_NUMBA:
        return _njit(*args, **kwargs)

    def wrap(fn):
        return fn

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return wrap

"""Kernel backend selection.

The compiled core is used for float64 inputs when it was built and
ATIYAH_SASAKI_PURE is not set; object arrays always take the numpy path.
"""
import os

import numpy as np

from . import _fallback

try:
    if os.environ.get("ATIYAH_SASAKI_PURE"):
        raise ImportError("pure mode requested")
    from . import _core
except ImportError:
    _core = None

BACKEND = "cython" if _core is not None else "numpy"


def _f64(*arrays):
    return all(x is None or (isinstance(x, np.ndarray) and x.dtype == np.float64) for x in arrays)


def _c(x):
    return None if x is None else np.ascontiguousarray(x, dtype=float)


def sectional_batch(R, S, D, r, a, X, al, Y, be):
    arrs = (R, S, D, a, X, al, Y, be)
    if _core is not None and _f64(*arrs):
        return _core.sectional_batch(*(_c(x) for x in (R, S, D)), float(r),
                                     *(_c(x) for x in (a, X, al, Y, be)))
    return _fallback.sectional_batch(R, S, D, r, a, X, al, Y, be)


def curvature_apply_batch(S, X, Y, xi):
    if _core is not None and _f64(S, X, Y, xi):
        return _core.curvature_apply_batch(*(_c(x) for x in (S, X, Y, xi)))
    return _fallback.curvature_apply_batch(S, X, Y, xi)

"""Hot-loop kernels with a compiled core and a NumPy fallback.

The Cython extension is selected at import time when it was built; setting
the environment variable ``REGIONER_PURE_PYTHON=1`` forces the fallback.
Both backends implement identical semantics (see ``benchmarks/bench_core.py``
for a speed comparison).
"""

import os

import numpy as np

from . import pure

_compiled = None
if not os.environ.get("REGIONER_PURE_PYTHON"):
    try:
        from . import _speedups as _compiled
    except ImportError:
        _compiled = None

USING_COMPILED = _compiled is not None


def backend_name():
    return "compiled" if USING_COMPILED else "pure-python"


def greedy_cover(points, alpha):
    """Indices of points accepted by sequential greedy cover insertion."""
    points = np.ascontiguousarray(points, dtype=np.float64)
    if _compiled is not None:
        return _compiled.greedy_cover(points, alpha)
    return pure.greedy_cover(points, alpha)


def jacobi_iterate(indptr, indices, data, shift, v0, tol, max_iter, record=False):
    """Dispatch the Jacobi sweep loop; returns (v, sweeps, residual, history)."""
    indptr = np.ascontiguousarray(indptr, dtype=np.int64)
    indices = np.ascontiguousarray(indices, dtype=np.int64)
    data = np.ascontiguousarray(data, dtype=np.float64)
    shift = np.ascontiguousarray(shift, dtype=np.float64)
    v0 = np.ascontiguousarray(v0, dtype=np.float64)
    if _compiled is not None:
        return _compiled.jacobi_iterate(
            indptr, indices, data, shift, v0, tol, int(max_iter), bool(record)
        )
    return pure.jacobi_iterate(indptr, indices, data, shift, v0, tol, int(max_iter), bool(record))

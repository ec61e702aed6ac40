"""NumPy fallbacks for the compiled hot loops.

Both entry points mirror ``regioner._core._speedups`` exactly; the dispatcher
in ``regioner._core`` picks whichever backend is available.
"""

import numpy as np
import scipy.sparse as sp


def greedy_cover(points, alpha):
    """Sequential greedy cover selection in data order.

    A point is accepted as a center iff its distance to every previously
    accepted center is >= alpha.  Returns the indices of accepted points.
    """
    n = points.shape[0]
    centers = np.empty_like(points)
    accepted = np.empty(n, dtype=np.int64)
    alpha2 = alpha * alpha
    m = 0
    for i in range(n):
        p = points[i]
        if m > 0:
            diff = centers[:m] - p
            if np.einsum("ij,ij->i", diff, diff).min() < alpha2:
                continue
        centers[m] = p
        accepted[m] = i
        m += 1
    return accepted[:m].copy()


def jacobi_iterate(indptr, indices, data, shift, v0, tol, max_iter, record):
    """Run simultaneous-update sweeps ``v <- M v + shift`` until the sup-norm
    update drops below ``tol`` or ``max_iter`` sweeps have run.

    ``M`` is given in CSR form.  Returns ``(v, sweeps, residual, history)``
    where ``history`` is the per-sweep residual list when ``record`` is set.
    """
    m = shift.shape[0]
    mat = sp.csr_matrix((data, indices, indptr), shape=(m, m))
    v = v0.copy()
    history = [] if record else None
    residual = 0.0
    for sweep in range(1, max_iter + 1):
        v_new = mat @ v + shift
        residual = float(np.abs(v_new - v).max()) if m else 0.0
        v = v_new
        if record:
            history.append(residual)
        if residual < tol:
            return v, sweep, residual, history
    return v, max_iter, residual, history

# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: greedy cover insertion and Jacobi voltage sweeps."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def greedy_cover(const double[:, ::1] points, double alpha):
    """Sequential greedy cover selection in data order; returns accepted indices."""
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    cdef cnp.ndarray centers_arr = np.empty((n, d), dtype=np.float64)
    cdef cnp.ndarray accepted_arr = np.empty(n, dtype=np.int64)
    cdef double[:, ::1] centers = centers_arr
    cdef long long[::1] accepted = accepted_arr
    cdef double alpha2 = alpha * alpha
    cdef Py_ssize_t i, c, k, m = 0
    cdef double dist2, diff
    cdef bint taken
    for i in range(n):
        taken = True
        for c in range(m):
            dist2 = 0.0
            for k in range(d):
                diff = centers[c, k] - points[i, k]
                dist2 += diff * diff
            if dist2 < alpha2:
                taken = False
                break
        if taken:
            for k in range(d):
                centers[m, k] = points[i, k]
            accepted[m] = i
            m += 1
    return accepted_arr[:m].copy()


def jacobi_iterate(const long long[::1] indptr, const long long[::1] indices,
                   const double[::1] data, const double[::1] shift, const double[::1] v0,
                   double tol, long long max_iter, bint record):
    """Sweep ``v <- M v + shift`` (CSR ``M``) until sup-norm update < tol."""
    cdef Py_ssize_t m = shift.shape[0]
    cdef cnp.ndarray v_arr = np.array(v0, dtype=np.float64, copy=True)
    cdef cnp.ndarray w_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] v = v_arr
    cdef double[::1] w = w_arr
    cdef double residual = 0.0, s, delta
    cdef Py_ssize_t i
    cdef long long k, sweep
    history = [] if record else None
    if m == 0:
        return v_arr, 0, 0.0, history
    for sweep in range(1, max_iter + 1):
        residual = 0.0
        for i in range(m):
            s = 0.0
            for k in range(indptr[i], indptr[i + 1]):
                s += data[k] * v[indices[k]]
            s += shift[i]
            w[i] = s
            delta = s - v[i]
            if delta < 0.0:
                delta = -delta
            if delta > residual:
                residual = delta
        v, w = w, v
        v_arr, w_arr = w_arr, v_arr
        if record:
            history.append(residual)
        if residual < tol:
            return v_arr, sweep, residual, history
    return v_arr, max_iter, residual, history

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation of sparse monomial sums in double precision."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def monomial_sum(const double complex[::1] coeffs, const cnp.int64_t[:, ::1] exps,
                 const double complex[:, ::1] points):
    """Evaluate sum_k coeffs[k] * prod_j points[:, j] ** exps[k, j].

    Returns ``(values, weight)``; ``weight`` is the running error multiplier,
    so the rounding error at each point is about ``2**-53 * weight``.
    """
    cdef Py_ssize_t P = points.shape[0], D = points.shape[1], K = coeffs.shape[0]
    cdef Py_ssize_t p, j, k, e, deg
    cdef cnp.int64_t[::1] maxe = np.zeros(max(D, 1), dtype=np.int64)
    for k in range(K):
        for j in range(D):
            if exps[k, j] > maxe[j]:
                maxe[j] = exps[k, j]
    cdef Py_ssize_t width = 1
    for j in range(D):
        if maxe[j] + 1 > width:
            width = maxe[j] + 1
    cdef double complex[:, ::1] pw = np.empty((max(D, 1), width), dtype=np.complex128)
    cdef double[:, ::1] apw = np.empty((max(D, 1), width), dtype=np.float64)
    cdef double[::1] acoef = np.empty(K, dtype=np.float64)
    out = np.empty(P, dtype=np.complex128)
    wout = np.empty(P, dtype=np.float64)
    cdef double complex[::1] vals = out
    cdef double[::1] weight = wout
    cdef double complex x, s, t
    cdef double ax, a, w
    for k in range(K):
        acoef[k] = abs(coeffs[k])
    for p in range(P):
        for j in range(D):
            x = points[p, j]
            ax = abs(x)
            pw[j, 0] = 1.0
            apw[j, 0] = 1.0
            for e in range(1, maxe[j] + 1):
                pw[j, e] = pw[j, e - 1] * x
                apw[j, e] = apw[j, e - 1] * ax
        s = 0.0
        w = 0.0
        for k in range(K):
            t = coeffs[k]
            a = acoef[k]
            deg = 0
            for j in range(D):
                e = exps[k, j]
                t = t * pw[j, e]
                a = a * apw[j, e]
                deg += e
            s = s + t
            w += abs(s) + (deg + D + 1) * a
        vals[p] = s
        weight[p] = w
    return out, wout

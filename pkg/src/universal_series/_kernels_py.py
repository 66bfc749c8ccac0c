"""Pure numpy fallback for :mod:`universal_series._kernels`.

Same arithmetic order as the compiled kernel: powers by repeated
multiplication, factors applied coefficient-first, sequential summation over
terms (``cumsum``).
"""
import numpy as np

_CHUNK_ELEMS = 1 << 21


def monomial_sum(coeffs, exps, points):
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    exps = np.ascontiguousarray(exps, dtype=np.int64)
    points = np.ascontiguousarray(points, dtype=np.complex128)
    P, D = points.shape
    K = coeffs.shape[0]
    vals = np.zeros(P, dtype=np.complex128)
    weight = np.zeros(P, dtype=np.float64)
    if K == 0:
        return vals, weight
    maxe = exps.max(axis=0) if D else np.zeros(0, dtype=np.int64)
    deg = exps.sum(axis=1) + D + 1
    acoef = np.abs(coeffs)
    chunk = max(16, _CHUNK_ELEMS // K)
    for lo in range(0, P, chunk):
        x = points[lo:lo + chunk]
        t = np.broadcast_to(coeffs, (x.shape[0], K)).copy()
        a = np.broadcast_to(acoef, (x.shape[0], K)).copy()
        for j in range(D):
            base = np.empty((x.shape[0], maxe[j] + 1), dtype=np.complex128)
            base[:, 0] = 1.0
            base[:, 1:] = x[:, j:j + 1]
            pw = np.cumprod(base, axis=1)
            abase = np.abs(base)
            abase[:, 0] = 1.0
            apw = np.cumprod(abase, axis=1)
            t *= pw[:, exps[:, j]]
            a *= apw[:, exps[:, j]]
        s = np.cumsum(t, axis=1)
        vals[lo:lo + chunk] = s[:, -1]
        weight[lo:lo + chunk] = np.abs(s).sum(axis=1) + (a * deg).sum(axis=1)
    return vals, weight

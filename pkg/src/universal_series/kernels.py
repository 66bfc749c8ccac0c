"""Backend selection and adaptive-precision evaluation of monomial sums.

The compiled Cython kernel is used when it imports; otherwise the numpy
fallback. Set ``UNIVERSAL_SERIES_PURE=1`` to force the fallback.
"""
from __future__ import annotations

import math
import os

import gmpy2
import numpy as np
from gmpy2 import mpc

from . import mp
from .errors import PrecisionError

if os.environ.get("UNIVERSAL_SERIES_PURE"):
    from ._kernels_py import monomial_sum as _double_kernel
    BACKEND = "python"
else:
    try:
        from ._kernels import monomial_sum as _double_kernel
        BACKEND = "compiled"
    except ImportError:  # extension not built
        from ._kernels_py import monomial_sum as _double_kernel
        BACKEND = "python"

from ._kernels_py import monomial_sum as python_monomial_sum  # noqa: E402

UNIT_ROUNDOFF = 2.0**-53
_SAFETY = 1.1


def monomial_sum(coeffs, exps, points):
    """Double-precision kernel of the active backend: ``(values, weight)``."""
    return _double_kernel(np.ascontiguousarray(coeffs, dtype=np.complex128),
                          np.ascontiguousarray(exps, dtype=np.int64),
                          np.ascontiguousarray(points, dtype=np.complex128))


def _scaled_double_coeffs(coeffs):
    """Coefficients as doubles after scaling by 2**-shift (shift keeps them finite)."""
    logs = [mp.log2_abs(c) for c in coeffs]
    top = max(logs)
    shift = 0 if not math.isfinite(top) or abs(top) < 500 else int(math.floor(top))
    with mp.ctx(max(64, mp.get_precision())):
        scale = gmpy2.mpfr(2) ** (-shift)
        out = np.array([complex(mpc(c) * scale) for c in coeffs], dtype=np.complex128)
    return out, shift


def _eval_mp(coeffs, exps, points, bits):
    P, D = points.shape
    with mp.ctx(bits):
        cols = [np.array([mpc(v) for v in points[:, j]], dtype=object) for j in range(D)]
        maxe = exps.max(axis=0) if len(exps) else np.zeros(D, dtype=np.int64)
        tables = []
        for j in range(D):
            tab = [None] * (int(maxe[j]) + 1)
            if maxe[j] >= 1:
                tab[1] = cols[j]
            for e in range(2, int(maxe[j]) + 1):
                tab[e] = tab[e - 1] * cols[j]
            tables.append(tab)
        acc = np.array([mpc(0)] * P, dtype=object)
        for c, e in zip(coeffs, exps):
            term = None
            for j in range(D):
                if e[j]:
                    term = tables[j][e[j]] if term is None else term * tables[j][e[j]]
            c = mpc(c)
            acc = acc + (np.array([c] * P, dtype=object) if term is None else term * c)
        return np.array([complex(v) for v in acc], dtype=np.complex128)


def _log2_weight_bound(coeffs, exps, points):
    """Overflow-safe log2 of sum_k (deg_k + D + 2) |c_k| max|x^e_k|, times K."""
    with np.errstate(divide="ignore"):
        logx = np.log2(np.abs(points)).max(axis=0) if len(points) else np.zeros(exps.shape[1])
    logc = np.array([mp.log2_abs(c) for c in coeffs])
    terms = logc + exps @ np.where(np.isfinite(logx), logx, -1e300)
    deg = exps.sum(axis=1) + exps.shape[1] + 2
    return float(np.max(terms + np.log2(deg))) + math.log2(2 * len(coeffs))


def evaluate_monomials(coeffs, exps, points, accuracy=1e-12, info=None):
    """Evaluate ``sum_k coeffs[k] * x**exps[k]`` at every row of ``points``.

    ``coeffs`` may hold mpc values of any size. The double kernel is used when
    its running error bound is below ``accuracy`` (absolute); otherwise the sum
    is recomputed with gmpy2 at just enough bits. ``info``, if a dict, receives
    the path taken and the error bound.
    """
    points = np.atleast_2d(np.asarray(points, dtype=np.complex128))
    exps = np.asarray(exps, dtype=np.int64).reshape(len(coeffs), points.shape[1])
    P = points.shape[0]
    if len(coeffs) == 0:
        if info is not None:
            info.update(path="double", bits=53, error_bound=0.0)
        return np.zeros(P, dtype=np.complex128)
    dcoeffs, shift = _scaled_double_coeffs(coeffs)
    vals, weight = monomial_sum(dcoeffs, exps, points)
    wmax = float(np.max(weight)) if P else 0.0
    if math.isfinite(wmax):
        log2_weight = (math.log2(wmax) if wmax > 0 else -math.inf) + shift
    else:
        log2_weight = _log2_weight_bound(coeffs, exps, points)
    bound_log2 = log2_weight + math.log2(UNIT_ROUNDOFF * _SAFETY)
    if bound_log2 < math.log2(accuracy) and abs(shift) < 900:
        if info is not None:
            info.update(path="double", bits=53, error_bound=2.0**bound_log2)
        return vals * (2.0**shift) if shift else vals
    bits = int(math.ceil(log2_weight - math.log2(accuracy))) + 32
    bits = max(bits, 64)
    if bits > mp.MAX_PRECISION:
        raise PrecisionError(f"evaluation needs {bits} bits (> {mp.MAX_PRECISION})")
    out = _eval_mp(coeffs, exps, points, bits)
    if info is not None:
        info.update(path="mp", bits=bits, error_bound=2.0 ** (log2_weight - bits + 1))
    return out

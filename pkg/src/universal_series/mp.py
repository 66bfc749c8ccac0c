"""Multiprecision helpers around gmpy2.

Coefficients of universal series grow very quickly (each new job divides by a
growing power of one coordinate), so they are stored as ``gmpy2.mpc`` values at
a working precision. Stored values are exact binary numbers; evaluation may run
at a higher precision than storage.

Transform arithmetic runs on exact rationals (``gmpy2.mpq``): solved
coefficients can carry more bits than the working precision, and a stored
value is never rounded again once written.
"""
from __future__ import annotations

import contextlib
import math

import gmpy2
from gmpy2 import mpc, mpfr, mpq

DEFAULT_PRECISION = 256
MAX_PRECISION = 1 << 14

_precision = DEFAULT_PRECISION


def get_precision() -> int:
    return _precision


@contextlib.contextmanager
def working_precision(bits: int | None = None):
    """Run the block with gmpy2 arithmetic at ``bits`` (default: current)."""
    global _precision
    saved = _precision
    if bits is not None:
        _precision = int(bits)
    try:
        with gmpy2.context(gmpy2.get_context(), precision=_precision):
            yield
    finally:
        _precision = saved


def ctx(bits: int | None = None):
    """gmpy2 context at ``bits`` without touching the module setting."""
    return gmpy2.context(gmpy2.get_context(), precision=bits or _precision)


def to_mpc(x) -> mpc:
    """Convert a number to mpc at the working precision (exact for doubles).

    mpc values already at or above the working precision pass through
    unchanged, so exact high-precision coefficients are never rounded.
    """
    if isinstance(x, mpc):
        pr, pi = x.precision
        if min(pr, pi) >= _precision:
            return x
        return mpc(x, precision=(max(pr, _precision), max(pi, _precision)))
    with ctx():
        if isinstance(x, (list, tuple)):
            return mpc(mpfr(x[0]), mpfr(x[1]))
        return mpc(x)


def zero() -> mpc:
    with ctx():
        return mpc(0)


def is_zero(x) -> bool:
    return x == 0


def log2_abs(x) -> float:
    """log2 |x| as a float, ``-inf`` for zero; safe for huge values."""
    if x == 0:
        return -math.inf
    with ctx(max(64, _precision)):
        return float(gmpy2.log2(abs(mpc(x))))


def _is_dyadic(q: mpq) -> bool:
    den = q.denominator
    return den & (den - 1) == 0


def _mantissa_bits(q: mpq) -> int:
    n = abs(q.numerator)
    if n == 0:
        return 1
    return n.bit_length() - gmpy2.bit_scan1(n)


def to_exact(z) -> tuple[mpq, mpq]:
    """(re, im) of a stored value as exact rationals."""
    z = to_mpc(z)
    return mpq(z.real), mpq(z.imag)


def exact_mpfr(q, bits: int | None = None) -> mpfr:
    """mpfr holding the dyadic rational ``q`` without rounding.

    The precision is the larger of ``bits`` (default: working precision) and
    the mantissa length of ``q``. Non-dyadic input raises ``ValueError``.
    """
    q = mpq(q)
    if not _is_dyadic(q):
        raise ValueError(f"{q} is not a dyadic rational")
    return mpfr(q, max(bits or _precision, _mantissa_bits(q)))


def from_exact(re, im, bits: int | None = None) -> mpc:
    """mpc from exact rationals; exact when ``bits`` is None, else rounded to ``bits``."""
    if bits is None:
        r, i = exact_mpfr(re), exact_mpfr(im)
    else:
        r, i = mpfr(mpq(re), bits), mpfr(mpq(im), bits)
    return mpc(r, i, precision=(r.precision, i.precision))


def _mpfr_str(x: mpfr) -> str:
    # exact decimal of m * 2^-k is (m * 5^k)e-k
    if not gmpy2.is_finite(x):
        raise ValueError(f"non-finite coefficient {x!r}")
    q = mpq(x)
    k = q.denominator.bit_length() - 1
    if k == 0:
        return str(q.numerator)
    return f"{q.numerator * 5 ** k}e-{k}"


def mpc_to_pair(z) -> list[str]:
    """Serialize to ``[re, im]`` exact decimal strings (``"75e-2"`` style)."""
    z = to_mpc(z)
    return [_mpfr_str(z.real), _mpfr_str(z.imag)]


def _parse_real(x, bits: int) -> mpfr:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        x = repr(x)
    try:
        q = mpq(str(x).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a decimal number: {x!r}") from None
    return exact_mpfr(q, bits) if _is_dyadic(q) else mpfr(q, bits)


def pair_to_mpc(pair, bits: int | None = None) -> mpc:
    """Inverse of :func:`mpc_to_pair`; also accepts plain JSON numbers.

    Binary-representable values are read exactly (precision grows as needed);
    anything else is rounded to ``bits``.
    """
    bits = bits or _precision
    re, im = pair
    r, i = _parse_real(re, bits), _parse_real(im, bits)
    return mpc(r, i, precision=(r.precision, i.precision))

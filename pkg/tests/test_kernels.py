import gmpy2
import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from universal_series import kernels, mp
from universal_series.errors import PrecisionError


def naive(coeffs, exps, points):
    """Term-by-term sum in mpmath at high precision."""
    out = []
    with mpmath.workprec(400):
        for p in points:
            s = mpmath.mpc(0)
            for c, e in zip(coeffs, exps):
                t = mpmath.mpc(c)
                for x, k in zip(p, e):
                    t *= mpmath.mpc(x) ** int(k)
                s += t
            out.append(complex(s))
    return np.array(out)


def test_backend_reported():
    assert kernels.BACKEND in ("compiled", "python")


def test_double_kernel_matches_naive(backend, rng):
    coeffs = rng.normal(size=40) + 1j * rng.normal(size=40)
    exps = rng.integers(0, 12, size=(40, 2))
    pts = rng.normal(size=(50, 2)) + 1j * rng.normal(size=(50, 2))
    vals, weight = kernels.monomial_sum(coeffs, exps, pts)
    ref = naive(coeffs, exps, pts)
    err = np.abs(vals - ref)
    assert np.all(err <= 2.0**-53 * 1.1 * weight)
    assert np.max(err / np.abs(ref)) < 1e-10


def test_backends_agree(rng):
    coeffs = rng.normal(size=100) + 1j * rng.normal(size=100)
    exps = rng.integers(0, 20, size=(100, 3))
    pts = np.exp(2j * np.pi * rng.random((300, 3)))
    a, wa = kernels.python_monomial_sum(*map(np.ascontiguousarray, (coeffs, exps.astype(np.int64), pts)))
    b, wb = kernels.monomial_sum(coeffs, exps, pts)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-13 * np.max(np.abs(a)))
    assert np.allclose(wa, wb, rtol=1e-12)


def test_empty_sum(backend):
    vals = kernels.evaluate_monomials([], np.zeros((0, 1), np.int64), np.ones((5, 1), complex))
    assert np.array_equal(vals, np.zeros(5))


def test_cancellation_goes_multiprecision(backend):
    # (z - 2)^40 expanded: huge coefficients that cancel on |z - 2| = 1
    n = 40
    with mp.ctx():
        coeffs = [gmpy2.mpc(gmpy2.bincoef(n, k)) * (-2) ** (n - k) for k in range(n + 1)]
    exps = np.arange(n + 1).reshape(-1, 1)
    pts = (2 + np.exp(1j * np.linspace(0, 6, 17))).reshape(-1, 1)
    info = {}
    vals = kernels.evaluate_monomials(coeffs, exps, pts, 1e-12, info)
    assert info["path"] == "mp"
    exact = (pts[:, 0] - 2) ** n
    assert np.max(np.abs(vals - exact)) < 1e-12


def test_benign_sum_stays_double(backend):
    info = {}
    kernels.evaluate_monomials([1, 0.5, 0.25], np.array([[0], [1], [2]]), np.array([[0.5j]]), 1e-12, info)
    assert info["path"] == "double"


def test_huge_coefficients_scaled(backend):
    with mp.ctx():
        c = [gmpy2.mpc(2) ** 1500, gmpy2.mpc(2) ** 1500]
    # value 2^1500 * (z - z) = 0 exactly for z = 1 and -1: both cancel terms
    pts = np.array([[1.0 + 0j]])
    vals = kernels.evaluate_monomials([c[0], -c[1]], np.array([[0], [1]]), pts, 1e-6)
    assert vals[0] == 0


def test_precision_cap(backend):
    with mp.ctx():
        c = [gmpy2.mpc(2) ** 40000, -gmpy2.mpc(2) ** 40000]
    with pytest.raises(PrecisionError):
        kernels.evaluate_monomials(c, np.array([[0], [1]]), np.array([[0.5 + 0j]]), 1e-12)


@given(st.lists(st.tuples(st.complex_numbers(max_magnitude=100), st.integers(0, 15)), min_size=1, max_size=12),
       st.complex_numbers(max_magnitude=1.5))
def test_evaluate_property(terms, z):
    coeffs = [c for c, _ in terms]
    exps = np.array([[e] for _, e in terms], np.int64)
    got = kernels.evaluate_monomials(coeffs, exps, np.array([[z]]), 1e-9)[0]
    ref = naive(coeffs, exps, [[z]])[0]
    assert abs(got - ref) <= 1e-9

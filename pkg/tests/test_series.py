from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from universal_series.compacta import ClosedDisc, ProductCompact, product_boundary_grid
from universal_series.enumeration import Enumeration
from universal_series.series import (CoefficientSequence, ParamPolynomial, PolyWZ, TargetFunction,
                                     eval_param_poly, eval_poly_wz, partial_sum_eval)
from universal_series.transforms import SequenceTransform

from oracles import partial_sum


def test_eval_param_poly_examples():
    assert eval_param_poly(ParamPolynomial(1, {(0,): 2, (1,): 3}), (1j,)) == 2 + 3j
    assert eval_param_poly(ParamPolynomial.constant(0, 5)) == 5
    assert eval_param_poly(ParamPolynomial(2, {(1, 1): 1}), (2, 3)) == 6


def test_eval_poly_wz_examples():
    one = PolyWZ(1, 2, {(0, 0): 1})
    assert eval_poly_wz(one, (0.3,), (1 + 1j, -2)) == 1
    q = PolyWZ(1, 1, {(2,): ParamPolynomial(1, {(1,): 1})})
    assert eval_poly_wz(q, (2,), (3,)) == 18


def test_eval_poly_wz_random_terms(rng):
    terms = {}
    naive = 0j
    w, z = (0.3 - 0.2j,), (1.1 + 0.4j, -0.7j)
    for _ in range(3):
        a = tuple(int(x) for x in rng.integers(0, 5, 2))
        ew = (int(rng.integers(0, 4)),)
        c = complex(rng.normal(), rng.normal())
        terms.setdefault(a, {})[ew] = c
    for a, t in terms.items():
        for ew, c in t.items():
            naive += c * w[0] ** ew[0] * z[0] ** a[0] * z[1] ** a[1]
    q = PolyWZ(1, 2, {a: ParamPolynomial(1, t) for a, t in terms.items()})
    assert abs(eval_poly_wz(q, w, z) - naive) < 1e-14 * max(1, abs(naive))
    pts = np.array([[w[0], z[0], z[1]]])
    assert abs(q.evaluate(pts)[0] - naive) < 1e-13


def test_canonical_form():
    p = ParamPolynomial(1, {(0,): 1, (3,): 0})
    assert dict(p.terms).keys() == {(0,)}
    q = ParamPolynomial(1, {(2,): 5})
    assert ((p + q) - q).terms == p.terms
    assert (q - q).is_zero()
    assert len(CoefficientSequence(0, {0: 0, 3: 1})) == 1


def test_param_poly_bad_exponent():
    with pytest.raises(ValueError):
        ParamPolynomial(2, {(1,): 1})
    with pytest.raises(ValueError):
        ParamPolynomial(1, {(-1,): 1})


def test_param_poly_mul():
    p = ParamPolynomial(1, {(0,): 1, (1,): 1})
    sq = p * p
    assert {e: complex(c) for e, c in sq.terms.items()} == {(0,): 1, (1,): 2, (2,): 1}


def grid_1d(center=0, radius=1, n=16):
    return product_boundary_grid(ProductCompact((ClosedDisc(center, radius),)), n)


def test_partial_sum_constant():
    a = CoefficientSequence(0, {0: 1})
    vals = partial_sum_eval(a, SequenceTransform.identity(), Enumeration(1), 0, grid_1d())
    assert np.all(vals == 1)


def test_partial_sum_identity_at_two():
    a = CoefficientSequence(0, {0: 1, 1: 1})
    vals = partial_sum_eval(a, SequenceTransform.identity(), Enumeration(1), 1, np.array([[2.0 + 0j]]))
    assert vals[0] == 3


def test_partial_sum_cesaro_eleven_sixths():
    a = CoefficientSequence(0, {0: 1})
    vals = partial_sum_eval(a, SequenceTransform.cesaro(), Enumeration(1), 2, np.array([[1.0 + 0j]]))
    assert abs(vals[0] - float(Fraction(11, 6))) < 1e-15


def test_partial_sum_matches_polywz(rng):
    e = Enumeration(2)
    items = {k: complex(*rng.normal(size=2)) for k in range(15)}
    a = CoefficientSequence(0, items)
    q = PolyWZ(0, 2, {e.enumerate(k): c for k, c in items.items()})
    grid = product_boundary_grid(ProductCompact((ClosedDisc(0, 1), ClosedDisc(1, 0.5))), 9)
    s = partial_sum_eval(a, SequenceTransform.identity(), e, 14, grid)
    assert np.max(np.abs(s - q.evaluate(grid.points))) < 1e-12


def test_partial_sum_matches_mpmath_oracle(rng, backend):
    e = Enumeration(2, "graded-max")
    a = CoefficientSequence(1, {k: ParamPolynomial(1, {(j,): complex(*rng.normal(size=2)) for j in range(3)})
                                for k in range(0, 20, 2)})
    pts = np.array([[0.5j, 1.2, -0.3 + 0.9j], [-0.8, 0.1j, 1.1]])
    for kind, b in (("identity", SequenceTransform.identity()), ("cesaro", SequenceTransform.cesaro())):
        got = partial_sum_eval(a, b, e, 19, pts)
        for p, g in zip(pts, got):
            ref = partial_sum(a, kind, e.enumerate, 19, p[:1], p[1:])
            assert abs(g - ref) < 1e-12 * max(1, abs(ref))


def test_partial_sum_negative_n():
    a = CoefficientSequence(0, {0: 1})
    assert np.all(partial_sum_eval(a, SequenceTransform.identity(), Enumeration(1), -1, grid_1d()) == 0)


small_c = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
seqs = st.dictionaries(st.integers(0, 12), small_c, max_size=8).map(lambda d: CoefficientSequence(0, d))


@given(seqs, seqs, small_c, small_c, st.sampled_from(["identity", "cesaro"]))
def test_partial_sum_linear(a, c, alpha, beta, kind):
    b = SequenceTransform(kind)
    e = Enumeration(1)
    pts = np.array([[0.9 + 0.2j], [-0.5j]])
    lhs = partial_sum_eval(a.combine(c, alpha, beta), b, e, 12, pts)
    rhs = alpha * partial_sum_eval(a, b, e, 12, pts) + beta * partial_sum_eval(c, b, e, 12, pts)
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * max(1, np.max(np.abs(rhs)))


def test_sequence_helpers():
    a = CoefficientSequence(0, {1: 2, 5: 3})
    assert a.support() == [1, 5]
    assert a[3].is_zero()
    assert a.truncated(5).support() == [1]
    assert a.updated({3: ParamPolynomial.constant(0, 1)}).support() == [1, 3, 5]
    assert a.support() == [1, 5]  # unchanged


def test_polywz_flatten_roundtrip():
    q = PolyWZ(1, 2, {(1, 0): ParamPolynomial(1, {(0,): 1, (2,): -1j}), (0, 3): 4})
    c, e = q.flatten()
    assert e.shape == (3, 3)
    assert PolyWZ.from_flat(1, 2, c, e) == q


def test_target_function_broadcasts_scalars():
    t = TargetFunction(lambda W, Z: 2.0)
    assert np.array_equal(t(np.zeros((3, 0)), np.zeros((3, 1))), np.full(3, 2.0))
    assert t.holomorphic_on(None, None)

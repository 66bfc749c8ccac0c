import numpy as np
import pytest
from hypothesis import given, strategies as st

from universal_series import transforms
from universal_series.errors import ConfigError, InvalidTransformError
from universal_series.series import CoefficientSequence, ParamPolynomial
from universal_series.transforms import SequenceTransform


def const(c, r=0):
    return ParamPolynomial.constant(r, c)


def as_complex(p):
    return {e: complex(c) for e, c in p.terms.items()}


def test_identity_apply():
    a = CoefficientSequence(1, {2: ParamPolynomial(1, {(1,): 1})})
    assert transforms.apply(SequenceTransform.identity(), a, 2) == a[2]


def test_cesaro_apply_examples():
    ones = CoefficientSequence(0, {0: 1, 1: 1, 2: 1})
    assert as_complex(transforms.apply(SequenceTransform.cesaro(), ones, 2)) == {(): 1}
    assert as_complex(transforms.apply(SequenceTransform.cesaro(), CoefficientSequence(0, {0: 1}), 3)) == {(): 0.25}


def test_solve_last_examples():
    a = CoefficientSequence(0, {0: 2})
    assert as_complex(transforms.solve_last(SequenceTransform.cesaro(), a, 1, 3)) == {(): 4}
    zeros = CoefficientSequence(0)
    assert transforms.solve_last(SequenceTransform.cesaro(), zeros, 2, 0).is_zero()
    p = ParamPolynomial(1, {(0,): 1, (4,): 2j})
    assert transforms.solve_last(SequenceTransform.identity(), CoefficientSequence(1, {0: p}), 3, p) == p


def test_zero_diagonal_rejected():
    with pytest.raises(InvalidTransformError):
        SequenceTransform.custom({1: [1, 0]})
    with pytest.raises(InvalidTransformError):
        SequenceTransform.custom({0: [1e-12]})


def test_bad_rows_rejected():
    with pytest.raises(ConfigError):
        SequenceTransform.custom({2: [1, 1]})
    with pytest.raises(ConfigError):
        SequenceTransform("cesaro", {0: [1]})
    with pytest.raises(ConfigError):
        SequenceTransform("borel")


def test_custom_missing_rows_are_identity():
    b = SequenceTransform.custom({1: [1, 2]})
    a = CoefficientSequence(0, {0: 1, 1: 1, 2: 5})
    assert as_complex(b.apply(a, 1)) == {(): 3}
    assert as_complex(b.apply(a, 2)) == {(): 5}


def random_transform(rng, n):
    rows = {}
    for k in range(n):
        row = list(rng.normal(size=k + 1) + 1j * rng.normal(size=k + 1))
        row[k] = np.exp(2j * np.pi * rng.random())
        rows[k] = row
    return SequenceTransform.custom(rows)


def random_poly(rng, r):
    return ParamPolynomial(r, {tuple(int(x) for x in rng.integers(0, 3, r)): complex(*rng.normal(size=2))
                               for _ in range(3)})


def test_roundtrip_100_random_transforms(rng):
    worst = 0.0
    for trial in range(100):
        n = int(rng.integers(1, 12))
        b = random_transform(rng, n)
        r = int(rng.integers(0, 3))
        k = n - 1
        a = CoefficientSequence(r, {i: random_poly(rng, r) for i in range(k)})
        target = random_poly(rng, r)
        c = b.solve_last(a, k, target)
        got = b.apply(a.updated({k: c}), k)
        worst = max(worst, (got - target).max_abs())
    assert worst < 1e-10


@given(st.integers(0, 30), st.lists(st.complex_numbers(max_magnitude=100), min_size=1, max_size=30),
       st.sampled_from(["identity", "cesaro"]))
def test_roundtrip_property(k, prefix, kind):
    b = SequenceTransform(kind)
    a = CoefficientSequence(0, dict(enumerate(prefix[:k])))
    target = const(1 - 2j)
    c = b.solve_last(a, k, target)
    assert (b.apply(a.updated({k: c}), k) - target).max_abs() < 1e-12


@given(st.dictionaries(st.integers(0, 20), st.complex_numbers(max_magnitude=10), max_size=10),
       st.integers(0, 20), st.complex_numbers(max_magnitude=10), st.sampled_from(["identity", "cesaro"]))
def test_triangularity(items, k, new, kind):
    b = SequenceTransform(kind)
    a = CoefficientSequence(0, items)
    changed = a.updated({k + 1 + i: const(new + i) for i in range(3)})
    assert b.apply(a, k) == b.apply(changed, k)


def test_solve_run_matches_repeated_solve_last(rng):
    for b in (SequenceTransform.identity(), SequenceTransform.cesaro(), random_transform(rng, 12)):
        a = CoefficientSequence(1, {i: random_poly(rng, 1) for i in range(4)})
        targets = [random_poly(rng, 1) for _ in range(8)]
        run = b.solve_run(a, 4, targets)
        work = a
        for i, t in enumerate(targets):
            c = b.solve_last(work, 4 + i, t)
            assert (c - run[4 + i]).max_abs() < 1e-12 * max(1, c.max_abs())
            work = work.updated({4 + i: c})
        full = a.updated(run)
        for i, t in enumerate(targets):
            assert (b.apply(full, 4 + i) - t).max_abs() < 1e-12


def test_apply_all_matches_apply():
    a = CoefficientSequence(0, {0: 1, 2: -3, 5: 2j})
    for b in (SequenceTransform.identity(), SequenceTransform.cesaro(),
              SequenceTransform.custom({3: [1, 2, 3, 4]})):
        vals = b.apply_all(a, 7)
        for k in range(8):
            assert (vals[k] - b.apply(a, k)).max_abs() < 1e-15


def test_config_roundtrip():
    b = SequenceTransform.custom({1: [0.5, 2]})
    cfg = b.to_config()
    assert cfg["kind"] == "custom" and list(cfg["rows"]) == ["1"]

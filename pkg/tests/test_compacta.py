import numpy as np
import pytest
from hypothesis import given, strategies as st

from universal_series.compacta import (ClosedDisc, FilledPolygon, ProductCompact, Segment,
                                       boundary_samples, compact_from_config, contains,
                                       excludes_zero, monomial_sup, product_boundary_grid,
                                       separated)
from universal_series.errors import ConfigError, GridSizeError


def P(*factors):
    return ProductCompact(factors)


def test_unit_disc_four_points_exact():
    assert list(boundary_samples(ClosedDisc(0, 1), 4)) == [1, 1j, -1, -1j]


def test_segment_three_points():
    assert np.allclose(boundary_samples(Segment(1, 2), 3), [1, 1.5, 2], atol=0)


def test_disc_samples_on_circle():
    pts = boundary_samples(ClosedDisc(2, 1), 360)
    assert len(pts) == 360
    assert np.max(np.abs(np.abs(pts - 2) - 1)) < 1e-12


def test_polygon_samples_on_edges():
    sq = FilledPolygon([0, 1, 1 + 1j, 1j])
    pts = boundary_samples(sq, 40)
    assert len(pts) == 40
    on_edge = (np.isclose(pts.real, 0) | np.isclose(pts.real, 1)
               | np.isclose(pts.imag, 0) | np.isclose(pts.imag, 1))
    assert on_edge.all()
    # equispaced by arclength: 10 per unit edge
    assert np.allclose(np.abs(np.diff(pts[:10])), 0.1)


def test_samples_deterministic():
    c = FilledPolygon([0, 2, 1 + 1j])
    assert np.array_equal(boundary_samples(c, 33, 0.5), boundary_samples(c, 33, 0.5))


def test_offset_samples_avoid_originals():
    d = ClosedDisc(0, 1)
    a, b = boundary_samples(d, 16), boundary_samples(d, 16, 0.5)
    assert np.min(np.abs(a[:, None] - b[None, :])) > 0.1


def test_grid_sizes():
    g = product_boundary_grid(P(ClosedDisc(0, 1), ClosedDisc(0, 1)), 16)
    assert g.points.shape == (256, 2)
    assert np.allclose(np.abs(g.points), 1)
    assert len(product_boundary_grid(P(ClosedDisc(0, 1), Segment(0, 1)), 32)) == 1024


def test_empty_product_is_one_point():
    g = product_boundary_grid(P(), 16)
    assert g.points.shape == (1, 0)


def test_grid_cap():
    with pytest.raises(GridSizeError):
        product_boundary_grid(P(ClosedDisc(0, 1), ClosedDisc(0, 1)), 2000)
    with pytest.raises(GridSizeError):
        product_boundary_grid(P(ClosedDisc(0, 1)), 100, max_points=50)


def test_grid_points_on_factor_boundaries():
    p = P(ClosedDisc(1j, 2), Segment(-1, 1 + 1j), FilledPolygon([0, 2, 2 + 2j, 2j]))
    g = product_boundary_grid(p, [8, 5, 12])
    assert len(g) == 8 * 5 * 12
    for i, f in enumerate(p.factors):
        assert all(f.contains(z) for z in g.points[:, i])


def test_grid_param_split():
    g = product_boundary_grid(P(ClosedDisc(0, 1), ClosedDisc(3, 1)), 8, n_params=1)
    assert g.w.shape == (64, 1) and g.z.shape == (64, 1)
    assert np.allclose(np.abs(g.z - 3), 1)


def test_excludes_zero_examples():
    # indices are 0-based
    assert excludes_zero(P(ClosedDisc(0, 1), ClosedDisc(3, 1))) == 1
    assert excludes_zero(P(ClosedDisc(0, 2), ClosedDisc(0, 1))) is None
    assert excludes_zero(P(ClosedDisc(2, 1), ClosedDisc(5, 1))) == 0
    assert excludes_zero(P(ClosedDisc(5, 1), ClosedDisc(2, 1))) == 1


def test_monomial_sup_examples():
    assert monomial_sup(P(ClosedDisc(2, 1)), (3,)) == 27
    assert monomial_sup(P(ClosedDisc(0, 1)), (5,)) == 1
    assert monomial_sup(P(Segment(1, 2), ClosedDisc(0, 1)), (2, 0)) == 4


def test_monomial_sup_matches_dense_samples():
    p = P(ClosedDisc(1 + 1j, 0.5), Segment(-2, 1j), FilledPolygon([1, 3, 2 + 2j]))
    m = (2, 3, 1)
    dense = 1.0
    for f, mi in zip(p.factors, m):
        dense *= np.max(np.abs(boundary_samples(f, 4096))) ** mi
    exact = monomial_sup(p, m)
    assert dense <= exact * (1 + 1e-12)
    assert dense >= exact * (1 - 2e-3)  # sampling spacing ~ perimeter / 4096


def test_contains_examples():
    assert not contains(ClosedDisc(2, 1), 0)
    assert contains(ClosedDisc(2, 1), 3)
    assert contains(Segment(0, 1), 0.5 + 1e-15j)
    assert not contains(Segment(0, 1), 0.5 + 1e-6j)


def test_polygon_contains():
    tri = FilledPolygon([0, 4, 4j])
    assert tri.contains(1 + 1j)
    assert tri.contains(2 + 2j)  # on the hypotenuse
    assert not tri.contains(3 + 3j)
    assert not tri.contains(-0.1)


@pytest.mark.parametrize("bad", [
    lambda: ClosedDisc(0, 0),
    lambda: Segment(1, 1),
    lambda: FilledPolygon([0, 1j, 1]),             # clockwise
    lambda: FilledPolygon([0, 2, 2j, 2 + 2j]),     # bow tie
    lambda: FilledPolygon([0, 1]),
])
def test_invalid_shapes(bad):
    with pytest.raises(ConfigError):
        bad()


def test_from_config():
    assert compact_from_config({"disc": {"center": [2, 0], "radius": 1}}) == ClosedDisc(2, 1)
    assert compact_from_config({"segment": {"a": [0, 0], "b": [1, 1]}}) == Segment(0, 1 + 1j)
    tri = FilledPolygon([0, 1, 1j])
    assert compact_from_config(tri.to_config()) == tri
    with pytest.raises(ConfigError):
        compact_from_config({"annulus": {}})
    with pytest.raises(ConfigError):
        compact_from_config({"disc": {"center": [0, 0]}})


def test_separated():
    assert separated(ClosedDisc(0, 1), ClosedDisc(3, 1))
    assert not separated(ClosedDisc(0, 1), ClosedDisc(1.5, 1))
    assert separated(Segment(0, 1), ClosedDisc(3, 1))
    assert not separated(Segment(0, 5), ClosedDisc(3, 1))


discs = st.builds(ClosedDisc, st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
                  st.floats(0.1, 3))
segments = st.tuples(st.complex_numbers(max_magnitude=5), st.complex_numbers(max_magnitude=5)).filter(
    lambda ab: abs(ab[0] - ab[1]) > 1e-3).map(lambda ab: Segment(*ab))


@given(st.lists(st.one_of(discs, segments), min_size=1, max_size=3),
       st.data())
def test_monomial_sup_submultiplicative(factors, data):
    p = ProductCompact(tuple(factors))
    idx = st.lists(st.integers(0, 6), min_size=len(factors), max_size=len(factors))
    m1, m2 = data.draw(idx), data.draw(idx)
    both = tuple(x + y for x, y in zip(m1, m2))
    assert monomial_sup(p, both) <= monomial_sup(p, m1) * monomial_sup(p, m2) * (1 + 1e-12) + 1e-9


@given(st.lists(st.one_of(discs, segments), min_size=1, max_size=4))
def test_excludes_zero_none_iff_all_contain_zero(factors):
    p = ProductCompact(tuple(factors))
    i = excludes_zero(p)
    if i is None:
        assert all(f.contains(0) for f in factors)
    else:
        assert not factors[i].contains(0)
        ok = [f.sup_modulus() for f in factors if not f.contains(0)]
        assert factors[i].sup_modulus() == min(ok)


@given(discs, st.integers(1, 500))
def test_disc_samples_property(d, n):
    pts = boundary_samples(d, n, 0.25)
    assert np.max(np.abs(np.abs(pts - d.center) - d.radius)) < 1e-12 * max(1, abs(d.center) + d.radius)

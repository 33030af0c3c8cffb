from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gitgauge import geometry as geo
from gitgauge.geometry import InnerProduct, Position


# -- scalars and parsing ------------------------------------------------------


def test_parse_rational_forms():
    assert geo.parse_rational("6/4") == Fraction(3, 2)
    assert geo.parse_rational(-3) == -3
    assert geo.parse_rational(" -1/2 ") == Fraction(-1, 2)
    for bad in ("0.5", "1/0", True, "x"):
        with pytest.raises((ValueError, TypeError, ZeroDivisionError)):
            geo.parse_rational(bad)


def test_format_rational_is_reduced():
    assert geo.format_rational(Fraction(4, 2)) == 2
    assert geo.format_rational(Fraction(-6, 4)) == "-3/2"


def test_dimension_mismatch():
    with pytest.raises(geo.DimensionError):
        geo.dot((1, 2), (1,))
    with pytest.raises(geo.DimensionError):
        geo.hull_contains([(1, 0)], (1,))


def test_inner_product_validation():
    with pytest.raises(ValueError):
        InnerProduct(((1, 2), (2, 1)))  # indefinite
    with pytest.raises(ValueError):
        InnerProduct(((1, 1), (0, 1)))  # not symmetric
    g = InnerProduct(((2, 1), (1, 2)))
    assert g.apply(g.inverse().apply((3, -1))) == (3, -1)


# -- hull membership ------------------------------------------------------------


def test_hull_contains_examples():
    res = geo.hull_contains([(-1,), (1,)], (0,))
    assert res.inside and res.coefficients == (Fraction(1, 2), Fraction(1, 2))

    res = geo.hull_contains([(-1,)], (0,))
    assert not res.inside
    assert res.covector == (1,) and res.margin == 1

    tri = [(0, 0), (2, 0), (0, 2)]
    res = geo.hull_contains(tri, (Fraction(1, 2), Fraction(1, 2)))
    assert res.inside
    # an explicit convex combination exists, so the LP must agree
    assert geo.add(geo.scale(Fraction(1, 4), (2, 0)), geo.scale(Fraction(1, 4), (0, 2))) == (
        Fraction(1, 2),
        Fraction(1, 2),
    )


def in_open_triangle(q):
    # facets x >= 0, y >= 0, x + y <= 2 of the triangle (0,0), (2,0), (0,2)
    return q[0] > 0 and q[1] > 0 and q[0] + q[1] < 2


def test_hull_position_examples():
    assert geo.hull_position([(-1,), (1,)], (1,)) == (Position.RELATIVE_BOUNDARY, 1)
    assert geo.hull_position([(Fraction(2, 3),)], (Fraction(2, 3),)) == (Position.RELATIVE_INTERIOR, 0)
    q = (Fraction(1, 2), Fraction(1, 2))
    assert in_open_triangle(q)
    assert geo.hull_position([(0, 0), (2, 0), (0, 2)], q) == (Position.RELATIVE_INTERIOR, 2)


def test_hull_position_lower_dimensional():
    seg = [(0, 0), (2, 2)]
    assert geo.hull_position(seg, (1, 1)) == (Position.RELATIVE_INTERIOR, 1)
    assert geo.hull_position(seg, (2, 2)) == (Position.RELATIVE_BOUNDARY, 1)
    assert geo.hull_position(seg, (1, 0))[0] is Position.OUTSIDE


def test_closest_point_examples():
    assert geo.closest_point([(1,)]) == (1,)
    assert geo.closest_point([(-1,), (1,)]) == (0,)
    c = geo.closest_point([(1, 0), (0, 1)])
    assert c == (Fraction(1, 2), Fraction(1, 2))
    assert geo.dot(c, c) == Fraction(1, 2) <= 1


def test_closest_point_metric():
    g = InnerProduct(((1, 0), (0, 4)))
    # under (x, y) -> x^2 + 4 y^2 the vertex (0, 1) costs 4, so the minimizer leans to (1, 0)
    c = geo.closest_point([(1, 0), (0, 1)], g)
    assert c == (Fraction(4, 5), Fraction(1, 5))


def test_ray_boundary_crossings_examples():
    assert geo.ray_boundary_crossings([(-1,), (1,)], (0,), (1,)) == [1]
    assert geo.ray_boundary_crossings([(-1,), (1,)], (0,), (0,)) == []
    tri = [(0, 0), (2, 0), (0, 2)]
    # the ray (1/2 + t, 1/2 + t) meets the facet x + y = 2 where 1 + 2t = 2
    assert geo.ray_boundary_crossings(tri, (Fraction(1, 2), Fraction(1, 2)), (1, 1)) == [Fraction(1, 2)]


def test_lattice_box_counts():
    assert list(geo.lattice_box(1, 1)) == [(-1,), (1,)]
    assert len(list(geo.lattice_box(2, 1))) == 8
    assert len(set(geo.lattice_box(3, 2))) == 124


def test_integerize():
    assert geo.integerize((Fraction(2, 3), Fraction(-4, 3))) == (1, -2)
    assert geo.integerize((0, 0)) == (0, 0)


# -- properties -----------------------------------------------------------------

coord = st.integers(-3, 3)
frac = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def points_strategy(r):
    return st.lists(st.tuples(*[coord] * r), min_size=1, max_size=5)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3).flatmap(lambda r: st.tuples(points_strategy(r), st.tuples(*[frac] * r))))
def test_hull_certificates_are_exact(data):
    points, q = data
    res = geo.hull_contains(points, q)
    if res.inside:
        assert all(a >= 0 for a in res.coefficients)
        assert sum(res.coefficients) == 1
        combo = [sum(a * p[j] for a, p in zip(res.coefficients, points)) for j in range(len(q))]
        assert tuple(combo) == tuple(q)
    else:
        assert all(geo.dot(res.covector, p) <= res.bound for p in points)
        assert geo.dot(res.covector, q) > res.bound


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3).flatmap(lambda r: points_strategy(r)))
def test_closest_point_variational_inequality(points):
    c = geo.closest_point(points)
    assert geo.hull_contains(points, c).inside
    for p in points:
        assert geo.dot(geo.sub(p, c), c) >= 0


@settings(max_examples=40, deadline=None)
@given(points_strategy(2), st.tuples(frac, frac), st.tuples(coord, coord))
def test_hull_position_translation_invariant(points, q, shift):
    moved = [geo.add(p, shift) for p in points]
    assert geo.hull_position(points, q) == geo.hull_position(moved, geo.add(q, shift))


@settings(max_examples=40, deadline=None)
@given(points_strategy(2), st.tuples(frac, frac), st.integers(-2, 2))
def test_hull_position_unimodular_invariant(points, q, a):
    def u(v):
        return (v[0] + a * v[1], v[1])

    assert geo.hull_position(points, q) == geo.hull_position([u(p) for p in points], u(q))


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 2).flatmap(
        lambda r: st.tuples(points_strategy(r), st.tuples(*[frac] * r), st.tuples(*[coord] * r))
    )
)
def test_crossings_flip_membership(data):
    points, base, direction = data
    ts = geo.ray_boundary_crossings(points, base, direction)
    assert list(ts) == sorted(set(ts))
    eps = Fraction(1, 1000)

    def inside(t):
        return geo.hull_contains(points, geo.add(base, geo.scale(t, direction))).inside

    for t in ts:
        assert t > 0
        assert inside(t)
        # status differs on at least one side of every crossing
        assert not inside(t - eps) or not inside(t + eps)

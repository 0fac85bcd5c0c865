from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from src.errors import CollinearTripleError, DegenerateTriangleError, PerturbationFailure, ZeroLengthSegmentError
from src.geometry_core import (
    AffineMap,
    CrossKind,
    Orientation,
    Point,
    Region,
    affine_map_three,
    in_open_segment,
    integer_coordinates,
    is_general_position,
    linf_distance,
    orient,
    perturb_generic,
    point,
    point_in_triangle,
    segments_cross,
    to_rational,
)

small = st.integers(min_value=-50, max_value=50)
points = st.builds(point, small, small)
# a coarse grid makes touching and collinear segments common
grid_points = st.builds(point, st.integers(-3, 3), st.integers(-3, 3))


def test_orient_basic_turns():
    assert orient(point(0, 0), point(1, 0), point(0, 1)) is Orientation.L
    assert orient(point(0, 0), point(1, 0), point(0, -1)) is Orientation.R
    assert orient(point(0, 0), point(1, 1), point(2, 2)) is Orientation.C


def test_orient_is_exact_for_tiny_offsets():
    eps = Fraction(1, 10**30)
    assert orient(point(0, 0), point(1, 0), Point(Fraction(2), eps)) is Orientation.L


@given(points, points, points)
def test_alternating_rule(u, v, w):
    base = orient(u, v, w)
    assert orient(v, w, u) is base
    assert orient(w, u, v) is base
    assert orient(v, u, w) is -base
    assert orient(u, w, v) is -base


@given(points, points, points, st.integers(1, 20), st.integers(-20, 20), st.integers(-20, 20))
def test_positive_scaling_and_translation_preserve(u, v, w, s, dx, dy):
    m = AffineMap.scaling(Fraction(s)).then(AffineMap.translation(Fraction(dx), Fraction(dy)))
    assert orient(m(u), m(v), m(w)) is orient(u, v, w)


@given(points, points, points)
def test_mirror_flips_orientation(u, v, w):
    m = AffineMap.mirror_x()
    assert orient(m(u), m(v), m(w)) is -orient(u, v, w)


def test_orientation_parse_and_letters():
    assert Orientation.parse("L") is Orientation.L
    assert Orientation.parse(" r ") is Orientation.R
    assert Orientation.C.letter == "C"
    with pytest.raises(ValueError):
        Orientation.parse("x")


@pytest.mark.parametrize(
    "raw, expected",
    [
        ("3/4", Fraction(3, 4)),
        ("0.1", Fraction(1, 10)),
        (0.1, Fraction(1, 10)),
        (-2, Fraction(-2)),
    ],
)
def test_to_rational(raw, expected):
    assert to_rational(raw) == expected


def test_point_in_triangle_regions():
    a, b, c = point(0, 0), point(4, 0), point(0, 4)
    assert point_in_triangle(point(1, 1), a, b, c) is Region.INTERIOR
    assert point_in_triangle(point(2, 0), a, b, c) is Region.BOUNDARY
    assert point_in_triangle(point(0, 0), a, b, c) is Region.BOUNDARY
    assert point_in_triangle(point(3, 3), a, b, c) is Region.EXTERIOR
    # clockwise corners give the same answers
    assert point_in_triangle(point(1, 1), a, c, b) is Region.INTERIOR


def test_point_in_degenerate_triangle_raises():
    with pytest.raises(DegenerateTriangleError):
        point_in_triangle(point(1, 1), point(0, 0), point(1, 0), point(2, 0))


@pytest.mark.parametrize(
    "p1, q1, p2, q2, kind",
    [
        ((0, 0), (2, 2), (0, 2), (2, 0), CrossKind.PROPER),
        ((0, 0), (1, 0), (0, 1), (1, 1), CrossKind.DISJOINT),
        ((0, 0), (2, 0), (2, 0), (3, 5), CrossKind.SHARED_ENDPOINT),
        ((0, 0), (2, 0), (1, 0), (1, 3), CrossKind.TOUCH),
        ((0, 0), (3, 0), (1, 0), (5, 0), CrossKind.OVERLAP),
        ((0, 0), (1, 0), (1, 0), (2, 0), CrossKind.SHARED_ENDPOINT),
        ((0, 0), (1, 0), (2, 0), (3, 0), CrossKind.DISJOINT),
    ],
)
def test_segments_cross(p1, q1, p2, q2, kind):
    result = segments_cross(point(*p1), point(*q1), point(*p2), point(*q2))
    assert result is kind
    assert result.is_violation == (kind in (CrossKind.PROPER, CrossKind.OVERLAP, CrossKind.TOUCH))


@given(grid_points, grid_points, grid_points, grid_points)
def test_segments_cross_ignores_segment_and_endpoint_order(p1, q1, p2, q2):
    assume(p1 != q1 and p2 != q2)
    kind = segments_cross(p1, q1, p2, q2)
    assert segments_cross(p2, q2, p1, q1) is kind
    assert segments_cross(q1, p1, p2, q2) is kind
    assert segments_cross(p1, q1, q2, p2) is kind
    assert segments_cross(q2, p2, q1, p1) is kind


def test_zero_length_segment_raises():
    with pytest.raises(ZeroLengthSegmentError):
        segments_cross(point(0, 0), point(0, 0), point(1, 0), point(2, 2))


def test_in_open_segment_excludes_endpoints():
    a, b = point(0, 0), point(4, 2)
    assert in_open_segment(point(2, 1), a, b)
    assert not in_open_segment(a, a, b)
    assert not in_open_segment(point(6, 3), a, b)


def test_affine_map_three_hits_targets():
    src = (point(1, 1), point(3, 2), point(0, 5))
    dst = (point(4, -2), point(4, 2), point(0, 0))
    m = affine_map_three(src, dst)
    assert [m(p) for p in src] == list(dst)
    assert m.preserves_orientation == (orient(*src) is orient(*dst))
    assert m.inverse()(dst[1]) == src[1]


@given(st.lists(points, min_size=6, max_size=6), points, points, points)
def test_affine_map_three_keeps_or_flips_every_turn(corners, u, v, w):
    src, dst = corners[:3], corners[3:]
    assume(orient(*src) is not Orientation.C and orient(*dst) is not Orientation.C)
    m = affine_map_three(src, dst)
    assert m.preserves_orientation == (orient(*src) is orient(*dst))
    base = orient(u, v, w)
    assert orient(m(u), m(v), m(w)) is (base if m.preserves_orientation else -base)


def test_affine_map_three_rejects_collinear():
    with pytest.raises(CollinearTripleError):
        affine_map_three((point(0, 0), point(1, 1), point(2, 2)), (point(0, 0), point(1, 0), point(0, 1)))


def test_rational_rotation_is_orthogonal():
    m = AffineMap.rational_rotation(Fraction(1, 3))
    assert m.det == 1
    p = m(point(1, 0))
    assert p.x**2 + p.y**2 == 1


def test_integer_coordinates_share_one_scale():
    coords = integer_coordinates([point("1/2", "1/3"), point(1, "5/6")])
    assert coords == [(3, 2), (6, 5)]


def test_general_position():
    assert is_general_position({"a": point(0, 0), "b": point(1, 0), "c": point(0, 1)})
    assert not is_general_position({"a": point(0, 0), "b": point(1, 1), "c": point(2, 2)})
    assert not is_general_position({"a": point(0, 0), "b": point(0, 0), "c": point(0, 1)})


def test_perturb_returns_generic_input_unchanged():
    emb = {"a": point(0, 0), "b": point(1, 0), "c": point(0, 1)}
    assert perturb_generic(emb, lambda e: True) == emb


def test_perturb_breaks_collinearity_and_keeps_strict_turns():
    emb = {
        "a": point(0, 0),
        "b": point(1, 1),
        "c": point(2, 2),
        "d": point(5, 0),
    }
    out = perturb_generic(emb, lambda e: True)
    assert is_general_position(out)
    assert orient(out["a"], out["b"], out["d"]) is orient(emb["a"], emb["b"], emb["d"])
    assert linf_distance(emb, out) <= Fraction(1, 1024)


def test_perturb_gives_up_when_predicate_never_holds():
    emb = {"a": point(0, 0), "b": point(1, 1), "c": point(2, 2)}
    with pytest.raises(PerturbationFailure):
        perturb_generic(emb, lambda e: False, max_halvings=3)

from fractions import Fraction

import pytest

from hvtcheck.errors import BadTimeOrder, InvalidRegion, TimeNotOutsideRegion
from hvtcheck.exact import QSqrt2, cos_quarter_pi, format_number, parse_number
from hvtcheck.spacetime import (
    Lattice,
    Region,
    admissible_slice_pairs,
    future_slice_complete,
    past_light_cone,
    past_overlap_top,
    rectangles,
    sigma,
    spacelike_separated,
    thick_slice,
)

L = Lattice(19, 5)


def pts(region):
    return {(p.x, p.t) for p in region}


def test_number_formatting():
    assert format_number(Fraction(3, 4)) == "3/4"
    assert format_number(Fraction(4)) == "4/1"
    assert format_number(QSqrt2(0, 2)) == "(0+2*sqrt2)/1"
    assert format_number(QSqrt2(Fraction(1, 2), Fraction(-1, 3))) == "(3-2*sqrt2)/6"


@pytest.mark.parametrize("text", ["3/4", "-1/7", "(1+2*sqrt2)/3", "(0-2*sqrt2)/1"])
def test_parse_inverts_format(text):
    assert format_number(parse_number(text)) == text


def test_quarter_pi_cosines():
    assert cos_quarter_pi(0) == 1
    assert cos_quarter_pi(2) == 0
    assert cos_quarter_pi(4) == -1
    c = cos_quarter_pi(1)
    assert c * c == Fraction(1, 2)


def test_diamond_shape():
    assert [L.slice_width(t) for t in range(6)] == [19, 17, 15, 13, 11, 9]
    assert L.n_points == 84
    assert L.contains((9, 5)) and not L.contains((3, 4))
    with pytest.raises(InvalidRegion):
        Lattice(3, 5)


def test_sigma_is_cone_section():
    assert pts(sigma(Region([(5, 4)]), 2, L)) == {(x, 2) for x in range(3, 8)}
    assert pts(sigma(Region([(5, 4)]), 0, L)) == {(x, 0) for x in range(1, 10)}


def test_sigma_rejects_time_inside_region():
    with pytest.raises(TimeNotOutsideRegion):
        sigma(Region([(5, 4)]), 4, L)


def test_future_section_clipped_at_top():
    assert not future_slice_complete(Region([(5, 4)]), 5, L)
    assert future_slice_complete(Region([(9, 3)]), 5, L)


def test_thick_slice_between_two_slices():
    got = pts(thick_slice(Region([(5, 4)]), 3, 2, L))
    assert got == {(x, 2) for x in range(3, 8)} | {(x, 3) for x in range(4, 7)}
    with pytest.raises(BadTimeOrder):
        thick_slice(Region([(5, 4)]), 1, 2, L)


def test_light_cone_contains_region_and_sigma():
    r = Region([(5, 4)])
    cone = past_light_cone(r, L)
    assert r.issubset(cone)
    assert sigma(r, 1, L).issubset(cone)


def test_spacelike_separation_of_the_two_wings():
    a, b = Region([(5, 4)]), Region([(13, 4)])
    assert spacelike_separated(a, b)
    assert not spacelike_separated(a, Region([(6, 3)]))
    assert past_overlap_top(a, b, L) == 0
    assert list(admissible_slice_pairs(a, b, L)) == [(2, 1), (3, 1), (3, 2)]


def test_region_validation():
    with pytest.raises(InvalidRegion):
        Region([])
    with pytest.raises(InvalidRegion):
        L.validate(Region([(0, 3)]))


def test_rectangles_of_size_one_are_points():
    assert len(rectangles(L, 1, 1)) == L.n_points

from fractions import Fraction

import pytest

from gasket.addresses import parse_address
from gasket.euclidean import Point2
from gasket.metrics import Dyadic
from gasket.spaces import TensorPoint
from gasket.utils.formatting import distance_record, format_distance, format_float, format_point


@pytest.mark.parametrize(
    "value, expected",
    [(0.5, "0.5"), (0.0, "0"), (1 / 3, "0.333333333333333"), (Fraction(1, 4), "0.25")],
)
def test_format_float(value, expected):
    assert format_float(value) == expected


class TestFormatPoint:
    def test_points(self):
        assert format_point(Point2(0.5, 0.0)) == "(0.5, 0)"
        assert format_point(Point2(Fraction(5, 32), Fraction(0))) == "(5/32, 0)"

    def test_named_tuples_with_their_own_text(self):
        assert format_point(TensorPoint("a", "T")) == "a⊗T"
        assert format_point(TensorPoint("b", Point2(1.0, 0.0))) == "b⊗(1, 0)"

    def test_other_values(self):
        assert format_point("L") == "L"
        assert format_point(3) == "3"
        assert format_point(parse_address("ab:L")) == "ab:L"


def test_format_distance():
    assert format_distance(Dyadic(1, 2)) == "1/2^2 = 0.25"
    assert format_distance(Dyadic(3, 3)) == "3/2^3 = 0.375"
    assert format_distance(Dyadic(0)) == "0"


def test_distance_record():
    record = distance_record(parse_address("a:T"), parse_address("b:T"), Dyadic(1, 1))
    assert record == {"x": "a:T", "y": "b:T", "exact": "1/2^1", "decimal": "0.5"}

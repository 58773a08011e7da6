from fractions import Fraction

import pytest

from gasket.addresses import parse_address
from gasket.coalgebras import (
    APEX,
    address_coalgebra,
    cantor_coalgebra,
    cantor_step,
    corner_coalgebra,
    load_coalgebra,
    parse_point,
    register_coalgebra,
    trivial_coalgebra,
)
from gasket.euclidean import Point2
from gasket.exceptions import ParameterError
from gasket.spaces import TensorPoint, check_regularity
from gasket.types.config import CoalgebraConfig, split_config
from gasket.types.main import RegularityKind
from gasket.universal_maps import final_morphism, structure_as_map


class TestCantorStep:
    @pytest.mark.parametrize(
        "x, expected",
        [
            (Fraction(0), ("b", Point2(0, 0))),
            (Fraction(1, 8), ("b", Point2(0, 0))),
            (Fraction(3, 16), ("b", Point2(Fraction(1, 2), 0))),
            (Fraction(1, 2), ("b", Point2(1, 0))),
            (Fraction(13, 16), ("c", Point2(Fraction(1, 2), 0))),
            (Fraction(1), ("c", Point2(1, 0))),
        ],
    )
    def test_case_table(self, x, expected):
        assert tuple(cantor_step(8, (x, 0))) == expected

    def test_apex(self):
        assert cantor_step(8, APEX) == TensorPoint("a", APEX)

    def test_staircase_points(self):
        """x₂ = 1/8 + 1/64 maps to b^ω and y₂ = x₂ + 1/64 to b·b·c^ω."""
        co = cantor_coalgebra(8)
        x2 = Fraction(1, 8) + Fraction(1, 64)
        y2 = x2 + Fraction(1, 64)
        assert final_morphism(co, Point2(x2, 0)).prefix(8) == "bbbbbbbb"
        assert final_morphism(co, Point2(y2, 0)).prefix(8) == "bbcccccc"

    def test_corner_images(self):
        co = cantor_coalgebra(8)
        assert final_morphism(co, APEX).prefix(5) == "aaaaa"
        assert final_morphism(co, Point2(0, 0)).prefix(5) == "bbbbb"
        assert final_morphism(co, Point2(1, 0)).prefix(5) == "ccccc"

    def test_rejects_small_j(self):
        with pytest.raises(ParameterError, match="j >= 4"):
            cantor_coalgebra(3)

    @pytest.mark.parametrize("j", [4, 8])
    def test_structure_is_lipschitz(self, j: int, rng):
        co = cantor_coalgebra(j)
        report = check_regularity(
            structure_as_map(co), RegularityKind.lipschitz, 400, constant=j / 2, rng=rng
        )
        assert report.passed, report.witnesses
        assert report.max_ratio > 0.9 * j / 2

    def test_structure_is_not_short(self, rng):
        report = check_regularity(
            structure_as_map(cantor_coalgebra(8)), RegularityKind.short, 200, rng=rng
        )
        assert not report.passed


class TestOtherCoalgebras:
    def test_corner_coalgebra(self):
        co = corner_coalgebra()
        assert co.step("L") == TensorPoint("b", "L")
        assert final_morphism(co, "R").prefix(4) == "cccc"

    def test_trivial_coalgebra(self):
        co = trivial_coalgebra(3)
        assert co.name == "trivial(3)"
        assert co.step(1) == TensorPoint("a", "T")
        assert final_morphism(co, 2).prefix(3) == "aaa"

    def test_address_coalgebra(self):
        co = address_coalgebra()
        assert co.step(parse_address("ab:L")) == TensorPoint("a", parse_address("b:L"))
        assert co.step(parse_address(":T")) == TensorPoint("a", parse_address(":T"))

    def test_address_structure_is_an_isometry(self, rng):
        report = check_regularity(
            structure_as_map(address_coalgebra()), RegularityKind.isometry, 200, rng=rng
        )
        assert report.passed, report.witnesses

    @pytest.mark.parametrize("build", [corner_coalgebra, trivial_coalgebra])
    def test_structure_is_short(self, build, rng):
        report = check_regularity(structure_as_map(build()), RegularityKind.short, 100, rng=rng)
        assert report.passed


class TestLoading:
    def test_by_name(self):
        assert load_coalgebra("gasket").name == "gasket"
        assert load_coalgebra({"cantor": {"j": 16}}).lipschitz_constant == 8

    def test_defaults(self):
        assert load_coalgebra({"cantor": {}}).name == "cantor(j=8)"
        assert load_coalgebra({"trivial": None}).name == "trivial(5)"
        assert load_coalgebra({"address": {"max_level": 3}}).name == "address"

    def test_passes_coalgebras_through(self):
        co = corner_coalgebra()
        assert load_coalgebra(co) is co

    @pytest.mark.parametrize(
        "config",
        [
            "nope",
            {"cantor": {"j": 3}},
            {"cantor": {"k": 1}},
            {"trivial": {"size": -1}},
            {"address": {"max_level": -1}},
        ],
    )
    def test_invalid_configs(self, config):
        with pytest.raises(ParameterError):
            load_coalgebra(config)

    def test_split_config(self):
        assert split_config({"cantor": {"j": 4}}) == ("cantor", {"j": 4})
        with pytest.raises(ValueError):
            split_config({"cantor": {}, "gasket": {}})

    def test_register(self):
        class ScaledConfig(CoalgebraConfig):
            size: int = 1

        register_coalgebra("scaled", lambda size: trivial_coalgebra(size * 2), ScaledConfig)
        assert load_coalgebra({"scaled": {"size": 2}}).name == "trivial(4)"


class TestParsePoint:
    def test_corners_and_integers(self):
        assert parse_point("T") == "T"
        assert parse_point(" 3 ") == 3

    def test_exact_and_float_coordinates(self):
        point = parse_point("9/64,0")
        assert point.x == Fraction(9, 64)
        assert isinstance(point.x, Fraction)
        assert parse_point("0.25, 0.5") == Point2(0.25, 0.5)
        assert isinstance(parse_point("0.25,0").x, float)

    @pytest.mark.parametrize("text", ["abc", "1,x", "1,2,3"])
    def test_bad_points(self, text):
        with pytest.raises(ParameterError):
            parse_point(text)

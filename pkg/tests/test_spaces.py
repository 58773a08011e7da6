import math

import pytest

from gasket.addresses import parse_address
from gasket.coalgebras import cantor_space
from gasket.euclidean import Point2, gasket_space
from gasket.exceptions import NotOneBoundedMetricError, NotTripointedMorphismError
from gasket.settings import get_settings
from gasket.spaces import (
    PointedMap,
    TensorPoint,
    TripointedSpace,
    address_space,
    check_regularity,
    corner_space,
    discrete_address_space,
    discrete_gap,
    discrete_space,
    glue_representative,
    prepend_algebra,
    structure_map,
    tensor_map,
    tensor_space,
)
from gasket.types.main import RegularityKind

settings = get_settings()


def _segment_map(function, name: str) -> PointedMap:
    space = cantor_space()

    def on_segment(point):
        if point[1] != 0:
            return point
        return Point2(function(float(point[0])), 0.0)

    return PointedMap(function=on_segment, domain=space, codomain=space, name=name)


class TestTensorSpace:
    @pytest.mark.parametrize("build", [corner_space, gasket_space, cantor_space, address_space])
    def test_distinguished_points_pairwise_at_one(self, build):
        assert tensor_space(build()).check_distinguished() == []

    def test_distinguished_points(self):
        space = tensor_space(corner_space())
        assert space.distinguished == (
            TensorPoint("a", "T"),
            TensorPoint("b", "L"),
            TensorPoint("c", "R"),
        )

    def test_glued_points_coincide(self):
        space = tensor_space(corner_space())
        assert space.metric(TensorPoint("a", "L"), TensorPoint("b", "T")) == 0
        assert space.metric(TensorPoint("b", "R"), TensorPoint("c", "L")) == 0

    def test_same_copy_is_half_scaled(self):
        space = tensor_space(gasket_space())
        p = TensorPoint("b", Point2(0.0, 0.0))
        q = TensorPoint("b", Point2(1.0, 0.0))
        assert space.metric(p, q) == pytest.approx(0.5)

    def test_discrete_tensor_values(self, rng):
        """M⊗G_ρ only takes the values 0, 1/2 and 1."""
        space = tensor_space(discrete_address_space())
        values = {space.metric(x, y) for x, y in space.sample_pairs(rng, 200)}
        assert values <= {0.0, 0.5, 1.0}
        assert 0.5 in values

    def test_rejects_metrics_above_one(self):
        stretched = TripointedSpace(
            name="stretched",
            metric=lambda x, y: 0.0 if x == y else 2.0,
            distinguished=("T", "L", "R"),
            sampler=lambda rng: "T",
        )
        with pytest.raises(NotOneBoundedMetricError):
            tensor_space(stretched).metric(TensorPoint("a", "T"), TensorPoint("a", "L"))

    def test_glue_representative(self):
        space = corner_space()
        assert glue_representative(space, TensorPoint("b", "T")) == TensorPoint("a", "L")
        assert glue_representative(space, TensorPoint("a", "L")) == TensorPoint("a", "L")
        assert glue_representative(space, TensorPoint("c", "R")) == TensorPoint("c", "R")


class TestTensorMap:
    def test_requires_pointed_map(self):
        space = corner_space()
        rotate = {"T": "L", "L": "R", "R": "T"}
        f = PointedMap(function=lambda z: rotate[z], domain=space, codomain=space)
        with pytest.raises(NotTripointedMorphismError):
            tensor_map(f)

    def test_applies_inside_each_copy(self):
        square = _segment_map(lambda x: x * x, "x^2")
        lifted = tensor_map(square)
        image = lifted(TensorPoint("b", Point2(0.5, 0.0)))
        assert image.letter == "b"
        assert image.inner == Point2(0.25, 0.0)

    def test_preserves_short_maps(self, rng):
        space = discrete_space(range(5))
        collapse = PointedMap(
            function=lambda point: point if point in ("T", "L", "R") else "T",
            domain=space,
            codomain=space,
            name="collapse",
        )
        assert check_regularity(collapse, RegularityKind.short, samples=100, rng=rng).passed
        lifted = tensor_map(collapse)
        assert check_regularity(lifted, RegularityKind.short, samples=100, rng=rng).passed

    def test_preserves_lipschitz_constants(self, rng):
        stretch = _segment_map(lambda x: min(3 * x, 1.0), "min(3x, 1)")
        for f in (stretch, tensor_map(stretch)):
            report = check_regularity(f, RegularityKind.lipschitz, 200, constant=3.0, rng=rng)
            assert report.passed, report.witnesses


class TestCheckRegularity:
    def test_detects_expansion(self, rng):
        stretch = _segment_map(lambda x: min(3 * x, 1.0), "min(3x, 1)")
        report = check_regularity(stretch, RegularityKind.short, samples=200, rng=rng)
        assert not report.passed
        assert report.max_ratio > 1
        assert report.witnesses[0].ratio == report.max_ratio

    def test_lipschitz_needs_constant(self):
        with pytest.raises(ValueError):
            check_regularity(_segment_map(abs, "abs"), RegularityKind.lipschitz)

    def test_isometry(self, rng):
        space = gasket_space()
        identity = PointedMap(function=lambda p: p, domain=space, codomain=space, name="id")
        assert check_regularity(identity, RegularityKind.isometry, samples=100, rng=rng).passed

    def test_explicit_pairs_come_first(self, rng):
        square = _segment_map(lambda x: x * x, "x^2")
        pair = (Point2(0.9, 0.0), Point2(1.0, 0.0))
        report = check_regularity(
            square, RegularityKind.lipschitz, 50, constant=2.0, rng=rng, extra_pairs=[pair]
        )
        assert report.passed
        assert report.witnesses[0].left == "(0.9, 0)"
        assert report.witnesses[0].ratio == pytest.approx(1.9)

    def test_report_serializes_with_alias(self, rng):
        report = check_regularity(
            _segment_map(lambda x: x, "id"), RegularityKind.short, samples=10, rng=rng
        )
        assert '"class": "short"' in report.json(by_alias=True)

    def test_prepend_on_discrete_addresses(self, rng):
        """g on G_ρ is 2-Lipschitz and continuous with delta 1/2 for epsilon 1/2."""
        g = structure_map(prepend_algebra(discrete_address_space()))
        lipschitz = check_regularity(g, RegularityKind.lipschitz, 200, constant=2.0, rng=rng)
        assert lipschitz.passed
        continuous = check_regularity(g, RegularityKind.continuous, 200, epsilons=(0.5,), rng=rng)
        assert continuous.deltas["0.5"] == 0.5

    def test_prepend_on_addresses_is_an_isometry(self, rng):
        g = structure_map(prepend_algebra())
        report = check_regularity(g, RegularityKind.isometry, samples=200, rng=rng)
        assert report.passed, report.witnesses


def test_discrete_gap_doubles():
    """The identity G → G_ρ stretches (aⁿ:T, aⁿ:L) by 2ⁿ."""
    frame = discrete_gap(6)
    assert list(frame.n) == list(range(7))
    assert list(frame.ratio) == [2.0**n for n in range(7)]


def test_corner_space():
    space = corner_space()
    assert space.contains("T")
    assert not space.contains("X")
    assert space.corner("L") == "L"
    assert space.metric("T", "R") == 1.0


def test_address_space_metric():
    space = address_space()
    assert space.metric(parse_address("a:L"), parse_address("b:T")) == 0.0
    assert math.isclose(space.metric(parse_address("a:T"), parse_address("a:L")), 0.5)

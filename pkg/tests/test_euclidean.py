import math

import pytest

from gasket.addresses import enumerate_level, glued_partner, parse_address
from gasket.completion import truncate
from gasket.euclidean import (
    LEFT,
    RIGHT,
    SQRT3_2,
    TOP,
    Point2,
    address_to_point,
    apply_word,
    barycentric,
    distortion_report,
    euclidean_distance,
    from_barycentric,
    ifs_map,
    in_triangle,
    points_frame,
    sigma_step,
    tau_algebra,
)
from gasket.exceptions import NotInCarrierError
from gasket.metrics import address_distance
from gasket.sampling import random_address
from gasket.spaces import TensorPoint, check_regularity, structure_map
from gasket.types.main import RegularityKind
from gasket.universal_maps import final_morphism, initial_morphism


def assert_close(p, q, tolerance: float = 1e-12):
    assert euclidean_distance(p, q) <= tolerance, f"{p} != {q}"


class TestIFS:
    def test_address_points(self):
        assert_close(address_to_point(parse_address(":T")), (0.5, SQRT3_2))
        assert_close(address_to_point(parse_address("a:R")), (0.75, math.sqrt(3) / 4))
        assert_close(address_to_point(parse_address("b:T")), (0.25, math.sqrt(3) / 4))
        assert_close(address_to_point("c:L"), (0.5, 0.0))

    def test_word_order(self):
        """The first letter picks the outermost copy."""
        assert_close(apply_word("ab", LEFT), ifs_map("a")(ifs_map("b")(LEFT)))
        assert apply_word("cc", RIGHT) == RIGHT

    def test_contractions_fix_their_vertex(self):
        assert_close(ifs_map("a")(TOP), TOP)
        assert_close(ifs_map("b")(LEFT), LEFT)
        assert_close(ifs_map("c")(RIGHT), RIGHT)

    @pytest.mark.parametrize("level", [1, 2, 3, 4, 5, 6])
    def test_glued_addresses_coincide(self, level: int):
        for addr in enumerate_level(level):
            partner = glued_partner(addr)
            if partner is not None:
                assert_close(address_to_point(addr), address_to_point(partner))

    def test_self_similarity(self):
        for depth in range(4):
            coarse = [address_to_point(a) for a in enumerate_level(depth)]
            fine = {
                (round(p.x, 9), round(p.y, 9))
                for p in (address_to_point(a) for a in enumerate_level(depth + 1))
            }
            images = {
                (round(q.x, 9), round(q.y, 9)) for m in "abc" for q in map(ifs_map(m), coarse)
            }
            assert fine == images

    def test_points_frame(self):
        frame = points_frame(2)
        assert list(frame.columns) == ["word", "corner", "x", "y"]
        assert len(frame) == 15


class TestBarycentric:
    def test_vertices(self):
        assert barycentric(TOP) == pytest.approx((1, 0, 0))
        assert barycentric(LEFT) == pytest.approx((0, 1, 0))
        assert barycentric(RIGHT) == pytest.approx((0, 0, 1))

    def test_round_trip(self, rng):
        for _ in range(50):
            p = address_to_point(random_address(rng, 8))
            assert_close(from_barycentric(barycentric(p)), p)

    def test_in_triangle(self):
        assert in_triangle(Point2(0.5, 0.1))
        assert not in_triangle(Point2(1.5, 0.0))


class TestSigma:
    def test_known_points(self):
        letter, inner = sigma_step(Point2(0.75, math.sqrt(3) / 4))
        assert letter == "a"
        assert_close(inner, RIGHT)

        letter, inner = sigma_step(Point2(0.5, 0.0))
        assert letter == "b"
        assert_close(inner, RIGHT)

    def test_vertices_stay_in_their_copy(self):
        assert sigma_step(TOP)[0] == "a"
        assert sigma_step(LEFT)[0] == "b"
        assert sigma_step(RIGHT)[0] == "c"

    def test_outside_the_triangle_raises(self):
        with pytest.raises(NotInCarrierError):
            sigma_step(Point2(2.0, 0.0))

    def test_hole_points_are_clamped(self):
        """A point of the removed middle triangle goes to the top copy, onto its bottom edge."""
        letter, inner = sigma_step(Point2(0.5, 0.35))
        assert letter == "a"
        assert_close(inner, (0.5, 0.0))

    def test_inverts_tau(self, rng):
        tau = tau_algebra()
        for _ in range(50):
            p = address_to_point(random_address(rng, 10))
            letter, inner = sigma_step(p)
            assert_close(tau.structure(TensorPoint(letter, inner)), p)

    def test_addresses_round_trip(self, sample_gasket_coalgebra, rng):
        """address_to_point(θ₁₂(p)) lands within 2⁻¹² of p."""
        for _ in range(100):
            p = address_to_point(random_address(rng, 12))
            q = address_to_point(truncate(final_morphism(sample_gasket_coalgebra, p), 12))
            assert euclidean_distance(p, q) <= 2**-12 + 1e-12


class TestEmbedding:
    @pytest.mark.parametrize("level", [4, 8])
    def test_initial_morphism_is_the_ifs(self, level: int):
        phi = initial_morphism(tau_algebra())
        for addr in enumerate_level(level):
            assert_close(phi(addr), address_to_point(addr))

    def test_tau_is_short(self, rng):
        report = check_regularity(
            structure_map(tau_algebra()), RegularityKind.short, samples=200, rng=rng
        )
        assert report.passed, report.witnesses

    def test_embedding_is_short(self):
        for x in enumerate_level(3):
            for y in enumerate_level(3):
                euclid = euclidean_distance(address_to_point(x), address_to_point(y))
                assert euclid <= float(address_distance(x, y)) + 1e-12

    def test_distortion_witness(self, rng):
        report = distortion_report(samples=200, depth=5, rng=rng)
        assert report.witness_ratio == pytest.approx(math.sqrt(3) / 2)
        assert report.max_ratio <= 1 + 1e-12
        assert 0 < report.min_ratio <= report.max_ratio

    def test_exhaustive_distortion(self):
        report = distortion_report(depth=2, exhaustive=True)
        assert report.samples == 15 * 14 // 2

    def test_no_pair_collapses_below_half(self):
        report = distortion_report(depth=4, exhaustive=True)
        assert report.min_ratio >= 0.5 - 1e-12

import itertools

import pytest

from gasket.addresses import (
    Address,
    canonicalize,
    corner_address,
    enumerate_level,
    equivalent,
    glued_partner,
    pad,
    parse_address,
    prepend,
)
from gasket.exceptions import (
    AddressSyntaxError,
    CannotShortenError,
    EnumerationTooLargeError,
    ParameterError,
)
from gasket.settings import get_settings, settings_context

settings = get_settings()


class TestParsing:
    def test_round_trip(self):
        for text in [":T", "a:L", "abc:R", "cccc:T"]:
            assert str(parse_address(text)) == text

    def test_empty_word(self):
        addr = parse_address(":L")
        assert addr.word == ""
        assert addr.level == 0

    @pytest.mark.parametrize("text", ["abd:T", "ab:X", "ab", "a:TL", ""])
    def test_bad_syntax_raises(self, text: str):
        with pytest.raises(AddressSyntaxError):
            parse_address(text)

    def test_address_of_validates(self):
        with pytest.raises(AddressSyntaxError):
            Address.of("xy", "T")
        with pytest.raises(AddressSyntaxError):
            Address.of("ab", "Q")


class TestGluing:
    def test_one_letter_gluings(self):
        """
        a⊗L = b⊗T, a⊗R = c⊗T and b⊗R = c⊗L; the lexicographically
        least representation wins.
        """
        assert canonicalize(parse_address("b:T")) == parse_address("a:L")
        assert canonicalize(parse_address("c:T")) == parse_address("a:R")
        assert canonicalize(parse_address("c:L")) == parse_address("b:R")

    def test_glued_partner_runs_into_the_corner(self):
        assert glued_partner(parse_address("ab:L")) == parse_address("ba:T")
        assert glued_partner(parse_address("bcb:T")) == parse_address("bca:L")

    def test_distinguished_points_have_no_partner(self):
        for text in [":T", "aaa:T", "bb:L", "c:R"]:
            assert glued_partner(parse_address(text)) is None

    def test_partner_is_an_involution(self):
        for addr in enumerate_level(4):
            partner = glued_partner(addr)
            if partner is not None:
                assert glued_partner(partner) == addr

    def test_canonical_addresses_are_fixed(self):
        for addr in enumerate_level(3):
            assert canonicalize(addr) == addr

    @pytest.mark.parametrize("level", range(7))
    def test_canonicalize_is_idempotent_on_raw_addresses(self, level: int):
        for letters in itertools.product("abc", repeat=level):
            for corner in "TLR":
                raw = Address.of("".join(letters), corner)
                once = canonicalize(raw)
                assert canonicalize(once) == once
                assert equivalent(raw, once)


class TestPadding:
    def test_pad_appends_corner_letter(self):
        assert pad(parse_address("a:L"), 3) == parse_address("abb:L")
        assert pad(parse_address(":R"), 2) == parse_address("cc:R")

    def test_pad_to_same_length_is_identity(self):
        addr = parse_address("abc:T")
        assert pad(addr, 3) == addr

    def test_cannot_shorten(self):
        with pytest.raises(CannotShortenError):
            pad(parse_address("abc:L"), 1)

    def test_equivalence_across_levels(self):
        assert equivalent(parse_address(":L"), parse_address("bb:L"))
        assert equivalent(parse_address("a:L"), parse_address("ba:T"))
        assert not equivalent(parse_address("a:L"), parse_address("a:R"))

    def test_corner_address(self):
        assert corner_address("T", 3) == parse_address("aaa:T")
        assert corner_address("R") == parse_address(":R")


class TestEquivalence:
    @staticmethod
    def names(text: str) -> list:
        """Raw spellings of one point."""
        x = parse_address(text)
        names = [x, canonicalize(x), pad(x, x.level + 2)]
        partner = glued_partner(x)
        if partner is not None:
            names.append(partner)
        return names

    @pytest.mark.parametrize("text", ["bcb:T", "c:L", "ab:R", "aa:T"])
    def test_spellings_of_one_point_are_equivalent(self, text: str):
        for x, y in itertools.combinations(self.names(text), 2):
            assert equivalent(x, y)

    def test_equivalence_relation_on_random_samples(self, rng):
        for _ in range(30):
            level = int(rng.integers(0, 5))
            word = "".join("abc"[i] for i in rng.integers(0, 3, size=level))
            corner = "TLR"[int(rng.integers(0, 3))]
            pool = self.names(f"{word}:{corner}") + [parse_address("ab:L"), parse_address(":R")]
            for x in pool:
                assert equivalent(x, x)
            for x, y in itertools.permutations(pool, 2):
                assert equivalent(x, y) == equivalent(y, x)
            for x, y, z in itertools.permutations(pool, 3):
                if equivalent(x, y) and equivalent(y, z):
                    assert equivalent(x, z)

    @pytest.mark.parametrize("text", ["bcb:T", "c:L", "a:R"])
    def test_prepend_respects_equivalence(self, text: str):
        for x, y in itertools.combinations(self.names(text), 2):
            for m in "abc":
                assert equivalent(prepend(m, x), prepend(m, y))


class TestPrepend:
    def test_prepend_canonicalizes(self):
        assert prepend("b", parse_address(":T")) == parse_address("a:L")
        assert prepend("a", parse_address("b:R")) == parse_address("ab:R")

    def test_prepend_rejects_bad_letter(self):
        with pytest.raises(AddressSyntaxError):
            prepend("d", parse_address(":T"))


class TestEnumeration:
    @pytest.mark.parametrize("level, count", [(0, 3), (1, 6), (2, 15), (3, 42), (4, 123)])
    def test_level_counts(self, level: int, count: int):
        assert len(enumerate_level(level)) == count

    def test_level_one(self):
        assert [str(addr) for addr in enumerate_level(1)] == [
            "a:T",
            "a:L",
            "a:R",
            "b:L",
            "b:R",
            "c:R",
        ]

    def test_sorted_and_canonical(self):
        addresses = enumerate_level(3)
        assert addresses == sorted(addresses)
        assert all(canonicalize(addr) == addr for addr in addresses)

    def test_enumeration_cap(self):
        with settings_context(enumeration_max_level=3, oracle_max_level=3):
            with pytest.raises(EnumerationTooLargeError):
                enumerate_level(4)

    def test_negative_level_raises(self):
        with pytest.raises(ParameterError, match="level must be >= 0"):
            enumerate_level(-1)

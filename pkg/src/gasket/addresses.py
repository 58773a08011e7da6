"""
Finite addresses: elements of Mⁿ⊗I and of the colimit G.

An address is a word over {a, b, c} followed by a corner in {T, L, R},
written ``"abc:L"``. Raw addresses of equal length name the same point when
they differ by one of the corner gluings a⊗L=b⊗T, a⊗R=c⊗T, b⊗R=c⊗L
under a common prefix, with the rest of the word running into the glued
corner (``ab:L`` = ``ba:T``). Every point has at most two raw addresses.
"""
import itertools
import re
from functools import lru_cache
from typing import List, NamedTuple, Optional, Union

import structlog

from gasket.exceptions import (
    AddressSyntaxError,
    CannotShortenError,
    EnumerationTooLargeError,
    ParameterError,
)
from gasket.settings import get_settings
from gasket.types.main import CORNER_LETTER, GLUED_PAIRS, LETTERS, Corner, Letter

logger = structlog.get_logger(__name__)
settings = get_settings()

__all__ = [
    "Address",
    "parse_address",
    "format_address",
    "corner_address",
    "glued_partner",
    "canonicalize",
    "equivalent",
    "same_point",
    "pad",
    "prepend",
    "enumerate_level",
]

ADDRESS_PATTERN = re.compile(r"^\s*([abc]*):([TLR])\s*$")


class Address(NamedTuple):
    word: str
    corner: Corner

    @classmethod
    def of(cls, word: str, corner: Union[Corner, str]) -> "Address":
        if any(letter not in LETTERS for letter in word):
            raise AddressSyntaxError(f"`{word}` contains letters outside of {{a, b, c}}")
        try:
            corner = Corner(str(corner))
        except ValueError:
            raise AddressSyntaxError(f"`{corner}` is not one of T, L, R") from None
        return cls(word, corner)

    def __str__(self):
        return f"{self.word}:{self.corner}"

    @property
    def level(self) -> int:
        return len(self.word)

    @property
    def letters(self) -> List[Letter]:
        return [Letter(m) for m in self.word]

    def sort_key(self) -> tuple:
        return (self.word, self.corner.rank)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __le__(self, other):
        return self.sort_key() <= other.sort_key()

    def __gt__(self, other):
        return self.sort_key() > other.sort_key()

    def __ge__(self, other):
        return self.sort_key() >= other.sort_key()


def parse_address(text: str) -> Address:
    match = ADDRESS_PATTERN.match(text)
    if match is None:
        raise AddressSyntaxError(f"`{text}` is not an address (expected e.g. `abc:L` or `:T`)")
    word, corner = match.groups()
    return Address(word, Corner(corner))


def format_address(addr: Address) -> str:
    return str(addr)


def corner_address(corner: Union[Corner, str], level: int = 0) -> Address:
    """The distinguished point `corner` of Mⁿ⊗I, i.e. letter(z)ⁿ⊗z."""
    corner = Corner(str(corner))
    return Address(CORNER_LETTER[corner.value] * level, corner)


def glued_partner(addr: Address) -> Optional[Address]:
    """
    The other raw representation of `addr`, or None when it has only one.

    The trailing run of letter(z) is stripped; the letter m in front of it
    is never letter(z), so (m, z) is always one of the glued pairs.

    >>> glued_partner(parse_address("bcb:T"))
    Address(word='bca', corner=<Corner.L: 'L'>)
    """
    corner = addr.corner.value
    word = addr.word
    run_letter = CORNER_LETTER[corner]
    run = len(word) - len(word.rstrip(run_letter))
    if run == len(word):
        # letter(z)ⁿ⊗z is a distinguished point, unique
        return None
    split = len(word) - run - 1
    partner_letter, partner_corner = GLUED_PAIRS[(word[split], corner)]
    partner_word = word[:split] + partner_letter + CORNER_LETTER[partner_corner] * run
    return Address(partner_word, Corner(partner_corner))


def canonicalize(addr: Address) -> Address:
    """
    Lexicographically least raw representation of `addr`
    (letters a < b < c, then corners T < L < R).
    """
    partner = glued_partner(addr)
    if partner is not None and partner < addr:
        return partner
    return addr


def pad(addr: Address, target_length: int) -> Address:
    """
    Push `addr` down the initial chain: append letter(z) until `target_length`.
    The result names the same element of G.
    """
    if target_length < addr.level:
        raise CannotShortenError(addr.level, target_length)
    extra = CORNER_LETTER[addr.corner.value] * (target_length - addr.level)
    return Address(addr.word + extra, addr.corner)


def pad_to_common(x: Address, y: Address) -> tuple:
    level = max(x.level, y.level)
    return pad(x, level), pad(y, level)


def equivalent(x: Address, y: Address) -> bool:
    """Whether `x` and `y` name the same point of G (shorter one padded first)."""
    if x.level != y.level:
        x, y = pad_to_common(x, y)
    return canonicalize(x) == canonicalize(y)


same_point = equivalent


def prepend(letter: Union[Letter, str], addr: Address) -> Address:
    """The initial-algebra structure map g: m⊗x ↦ m x, canonicalized."""
    letter = str(letter)
    if letter not in LETTERS:
        raise AddressSyntaxError(f"`{letter}` is not one of a, b, c")
    return canonicalize(Address(letter + addr.word, addr.corner))


def enumerate_level(level: int) -> List[Address]:
    """
    All canonical addresses of length `level`, sorted.
    There are 3 at level 0 and 3k-3 at level n+1 when there are k at level n.
    """
    if level < 0:
        raise ParameterError(f"level must be >= 0, got {level}")
    if level > settings.ENUMERATION_MAX_LEVEL:
        raise EnumerationTooLargeError(level, settings.ENUMERATION_MAX_LEVEL)
    return list(_enumerate_level(level))


@lru_cache(maxsize=8)
def _enumerate_level(level: int) -> tuple:
    logger.debug(f"enumerating canonical addresses at {level=}")
    addresses = []
    for letters in itertools.product(LETTERS, repeat=level):
        word = "".join(letters)
        for corner in Corner:
            addr = Address(word, corner)
            partner = glued_partner(addr)
            if partner is None or addr < partner:
                addresses.append(addr)
    return tuple(addresses)

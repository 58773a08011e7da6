"""
Exact quotient metrics on M⊗X, Mⁿ⊗I and G.

All address-space distances are dyadic rationals, so they are computed
exactly: internally as integers scaled by a power of two, externally as
`Dyadic` values.
"""
import os
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import structlog

from gasket.addresses import Address, enumerate_level, pad_to_common
from gasket.exceptions import EnumerationTooLargeError, NonDyadicError, NotOneBoundedMetricError
from gasket.settings import get_settings
from gasket.types.main import CORNER_LETTER, CORNER_RANK, CORNERS, GLUED_CORNERS, third_letter

logger = structlog.get_logger(__name__)
settings = get_settings()

__all__ = [
    "Dyadic",
    "ZERO",
    "ONE",
    "glued_distance",
    "check_unit_interval",
    "tensor_distance",
    "corner_distances",
    "address_distance",
    "common_prefix_bound",
    "DistanceTable",
    "distance_table",
]

Number = Union[int, Fraction, "Dyadic"]


@total_ordering
class Dyadic:
    """
    An exact rational numerator / 2**exponent, kept normalized
    (numerator odd, or zero with exponent 0).
    """

    __slots__ = ("numerator", "exponent")

    def __init__(self, numerator: int, exponent: int = 0):
        numerator = int(numerator)
        exponent = int(exponent)
        if exponent < 0:
            numerator <<= -exponent
            exponent = 0
        if numerator == 0:
            exponent = 0
        elif exponent:
            trailing_zeros = (numerator & -numerator).bit_length() - 1
            shift = min(trailing_zeros, exponent)
            numerator >>= shift
            exponent -= shift
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "exponent", exponent)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic values are immutable")

    @classmethod
    def from_fraction(cls, value: Union[int, Fraction, "Dyadic"]) -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        value = Fraction(value)
        denominator = value.denominator
        if denominator & (denominator - 1):
            raise NonDyadicError(f"{value} is not of the form k/2^e")
        return cls(value.numerator, denominator.bit_length() - 1)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def half(self) -> "Dyadic":
        return Dyadic(self.numerator, self.exponent + 1)

    def __float__(self):
        return self.numerator / (1 << self.exponent)

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.numerator == other.numerator and self.exponent == other.exponent
        if isinstance(other, (int, Fraction)):
            return self.as_fraction() == other
        if isinstance(other, float):
            return float(self) == other
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, Dyadic):
            other = other.as_fraction()
        if isinstance(other, (int, Fraction, float)):
            return self.as_fraction() < other
        return NotImplemented

    def __hash__(self):
        return hash(self.as_fraction())

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Dyadic)):
            return Dyadic.from_fraction(self.as_fraction() + _fraction(other))
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Dyadic)):
            return Dyadic.from_fraction(self.as_fraction() - _fraction(other))
        return NotImplemented

    def __rsub__(self, other):
        return Dyadic.from_fraction(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Dyadic)):
            return Dyadic.from_fraction(self.as_fraction() * _fraction(other))
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return Dyadic(-self.numerator, self.exponent)

    def __abs__(self):
        return Dyadic(abs(self.numerator), self.exponent)

    def __repr__(self):
        return f"Dyadic({self.numerator}, {self.exponent})"

    def __str__(self):
        if self.numerator == 0:
            return "0"
        return f"{self.numerator}/2^{self.exponent}"

    def decimal(self) -> str:
        """Exact decimal expansion (every dyadic has a finite one)."""
        sign = "-" if self.numerator < 0 else ""
        digits = str(abs(self.numerator) * 5**self.exponent)
        if self.exponent == 0:
            return sign + digits
        digits = digits.rjust(self.exponent + 1, "0")
        return f"{sign}{digits[:-self.exponent]}.{digits[-self.exponent:]}"


def _fraction(value) -> Fraction:
    if isinstance(value, Dyadic):
        return value.as_fraction()
    return Fraction(value)


ZERO = Dyadic(0)
ONE = Dyadic(1)

# (m1, m2) -> (rank of the corner of copy m1, rank of the corner of copy m2) glued together
GLUED_RANKS = {
    pair: (CORNER_RANK[left], CORNER_RANK[right]) for pair, (left, right) in GLUED_CORNERS.items()
}


def glued_distance(
    m1: str,
    x_dists: Sequence,
    m2: str,
    y_dists: Sequence,
    same_copy_dist,
    one,
):
    """
    Twice the distance between m1⊗x and m2⊗y in M⊗X.

    `x_dists`/`y_dists` are the (T, L, R) corner distances of x and y in X and
    `one` is the unit of the number type in use (1, 1.0, or 2**r for integers
    scaled by 2**r). Works for any ordered number type with + and min, and is
    monotone in every argument, which interval evaluation relies on.
    """
    if m1 == m2:
        return same_copy_dist
    x_corner, y_corner = GLUED_RANKS[(m1, m2)]
    direct = x_dists[x_corner] + y_dists[y_corner]
    # through the third copy, entering and leaving at two of its corners (distance 1 apart)
    m3 = third_letter(m1, m2)
    through = x_dists[GLUED_RANKS[(m1, m3)][0]] + one + y_dists[GLUED_RANKS[(m2, m3)][0]]
    # jumping straight between copies costs 1 in M×X
    return min(one + one, direct, through)


def check_unit_interval(values) -> None:
    for value in values:
        # floating point carriers get POINT_TOLERANCE of slack
        slack = settings.POINT_TOLERANCE if isinstance(value, float) else 0
        if value < -slack or value > 1 + slack:
            raise NotOneBoundedMetricError(value)


def tensor_distance(
    m1: str,
    x_dists: Sequence[Number],
    m2: str,
    y_dists: Sequence[Number],
    same_copy_dist: Optional[Number] = None,
) -> Dyadic:
    """
    The quotient metric d_{M⊗X}(m1⊗x, m2⊗y) from the corner distances of x and y.

    `same_copy_dist` is d_X(x, y); it is only needed when m1 == m2.
    """
    m1, m2 = str(m1), str(m2)
    inputs = [*x_dists, *y_dists]
    if same_copy_dist is not None:
        inputs.append(same_copy_dist)
    check_unit_interval(inputs)
    if m1 == m2 and same_copy_dist is None:
        raise ValueError("same_copy_dist is required when both points lie in one copy")

    doubled = glued_distance(
        m1,
        [_fraction(v) for v in x_dists],
        m2,
        [_fraction(v) for v in y_dists],
        None if same_copy_dist is None else _fraction(same_copy_dist),
        Fraction(1),
    )
    return Dyadic.from_fraction(doubled / 2)


@lru_cache(maxsize=2**16)
def _scaled_corner_distances(word: str, corner: str) -> Tuple[int, int, int]:
    """(d(x,T), d(x,L), d(x,R)) in M^len(word)⊗I, as integers scaled by 2**len(word)."""
    if not word:
        return tuple(0 if z.value == corner else 1 for z in CORNERS)
    inner = _scaled_corner_distances(word[1:], corner)
    one = 1 << (len(word) - 1)
    distances = []
    for z in CORNERS:
        # the corner z of the bigger space is letter(z)⊗z
        rank = CORNER_RANK[z.value]
        z_dists = [one, one, one]
        z_dists[rank] = 0
        distances.append(
            glued_distance(word[0], inner, CORNER_LETTER[z.value], z_dists, inner[rank], one)
        )
    return tuple(distances)


def corner_distances(addr: Address) -> Tuple[Dyadic, Dyadic, Dyadic]:
    scaled = _scaled_corner_distances(addr.word, addr.corner.value)
    return tuple(Dyadic(d, addr.level) for d in scaled)


def address_distance(x: Address, y: Address) -> Dyadic:
    """
    Exact d_G(x, y).

    Both are padded to a common level n; below their common prefix of length k
    the copies differ, so one application of the tensor metric to the corner
    distances of the remainders gives the distance, scaled by 2**-k.
    """
    x, y = pad_to_common(x, y)
    level = x.level
    k = len(os.path.commonprefix([x.word, y.word]))
    if k == level:
        return ZERO if x.corner == y.corner else Dyadic(1, level)

    remainder = level - k - 1
    doubled = glued_distance(
        x.word[k],
        _scaled_corner_distances(x.word[k + 1 :], x.corner.value),
        y.word[k],
        _scaled_corner_distances(y.word[k + 1 :], y.corner.value),
        None,
        1 << remainder,
    )
    return Dyadic(doubled, level)


def common_prefix_bound(x: Address, y: Address) -> Dyadic:
    """2**-k for the length k of the common prefix; an upper bound on d_G(x, y)."""
    x, y = pad_to_common(x, y)
    k = len(os.path.commonprefix([x.word, y.word]))
    return Dyadic(1, k)


class DistanceTable:
    """
    All pairwise distances between the canonical addresses of one level,
    stored as a square `pd.DataFrame` of `Dyadic` values labelled by address strings.
    """

    def __init__(
        self,
        level: int,
        distance: Callable[[Address, Address], Dyadic] = address_distance,
    ):
        self.level = level
        self.addresses = enumerate_level(level)
        labels = [str(addr) for addr in self.addresses]
        rows = [[distance(x, y) for y in self.addresses] for x in self.addresses]
        self.frame = pd.DataFrame(rows, index=labels, columns=labels, dtype=object)

    def __repr__(self):
        return f"<DistanceTable level={self.level} size={len(self.addresses)}>"

    def __len__(self):
        return len(self.addresses)

    def __getitem__(self, pair: Tuple[Address, Address]) -> Dyadic:
        x, y = pair
        return self.frame.at[str(x), str(y)]

    def check_axioms(self) -> List[str]:
        """Violations of symmetry, identity, 1-boundedness and the triangle inequality."""
        labels = list(self.frame.index)
        # every entry is a multiple of 2**-level, so integer arithmetic is exact
        scale = 1 << self.level
        values = np.array(
            [[int(d.as_fraction() * scale) for d in row] for row in self.frame.values],
            dtype=np.int64,
        )
        violations = []
        for i, j in zip(*np.nonzero(values != values.T)):
            violations.append(f"asymmetric: d({labels[i]}, {labels[j]})")
        off_diagonal_zeros = (values == 0) & ~np.eye(len(labels), dtype=bool)
        for i, j in zip(*np.nonzero(off_diagonal_zeros)):
            violations.append(f"identity: d({labels[i]}, {labels[j]}) = 0")
        for i in np.nonzero(np.diag(values) != 0)[0]:
            violations.append(f"identity: d({labels[i]}, {labels[i]}) != 0")
        for i, j in zip(*np.nonzero((values < 0) | (values > scale))):
            violations.append(f"not 1-bounded: d({labels[i]}, {labels[j]})")
        for j in range(len(labels)):
            # d(i, k) <= d(i, j) + d(j, k) for every i, k at once
            detour = values[:, j][:, None] + values[j, :][None, :]
            for i, k in zip(*np.nonzero(values > detour)):
                violations.append(f"triangle: {labels[i]}, {labels[j]}, {labels[k]}")
        return violations


def distance_table(level: int) -> DistanceTable:
    if level > settings.DISTANCE_TABLE_MAX_LEVEL:
        raise EnumerationTooLargeError(level, settings.DISTANCE_TABLE_MAX_LEVEL)
    logger.debug(f"building distance table at {level=}")
    return DistanceTable(level)

"""
The completion S of G: infinite address streams.

A point of S is a lazily produced sequence of letters m₀m₁m₂…; its
truncation ``m₀…m_{n-1}⊗T`` lies within 2**-n of it, so every distance on S
is returned as a certified interval (`ApproxReal`) computed from truncations.

Eventually periodic streams also carry a descriptor (head, block) for
head·block^ω, written ``"ab(c)"``. On descriptors equality is exact: the only
points with two expansions are the glued ones, w·a·b^ω = w·b·a^ω,
w·a·c^ω = w·c·a^ω and w·b·c^ω = w·c·b^ω.
"""
import itertools
import math
import re
import threading
from typing import Callable, Iterable, Iterator, NamedTuple, Optional, Tuple, Union

import numpy as np
import structlog

from gasket.addresses import Address, parse_address
from gasket.exceptions import AddressSyntaxError
from gasket.metrics import Dyadic, address_distance, glued_distance
from gasket.sampling import random_letters, random_word
from gasket.settings import get_settings
from gasket.spaces import TripointedSpace
from gasket.types.main import CORNER_LETTER, CORNERS, GLUED_PAIRS, LETTER_CORNER, LETTERS, Corner

logger = structlog.get_logger(__name__)
settings = get_settings()

__all__ = [
    "ApproxReal",
    "AddressStream",
    "corner_stream",
    "truncate",
    "depth_for_tolerance",
    "stream_distance",
    "tensor_stream_distance",
    "s_structure",
    "psi",
    "canonical_tail",
    "streams_equal",
    "parse_stream",
    "format_stream",
    "random_stream",
    "completion_space",
]

STREAM_PATTERN = re.compile(r"^\s*([abc]*)\(([abc]+)\)\s*$")

Descriptor = Tuple[str, str]


class ApproxReal(NamedTuple):
    """A real number known to lie in [value - radius, value + radius]."""

    value: float
    radius: float

    @classmethod
    def from_bounds(cls, lo: float, hi: float) -> "ApproxReal":
        return cls((lo + hi) / 2, (hi - lo) / 2)

    @property
    def lo(self) -> float:
        return self.value - self.radius

    @property
    def hi(self) -> float:
        return self.value + self.radius

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def overlaps(self, other: "ApproxReal") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def simplest_dyadic(self, max_exponent: int = 64) -> Optional[Dyadic]:
        """The dyadic k/2^e in the interval with the smallest e."""
        for exponent in range(max_exponent + 1):
            scale = 2.0**exponent
            numerator = math.ceil(self.lo * scale)
            if numerator <= self.hi * scale:
                return Dyadic(numerator, exponent)
        return None

    def __str__(self):
        return f"{self.value:.12g} ± {self.radius:.3g}"


class AddressStream:
    """
    An infinite letter sequence with memoized prefixes.

    `prefix(n)` only ever extends what was already produced, and concurrent
    callers share one cache guarded by a lock.
    """

    def __init__(self, letters: Iterable[str], descriptor: Optional[Descriptor] = None):
        self._letters: Iterator[str] = iter(letters)
        self._cache = ""
        self._lock = threading.Lock()
        self.descriptor = descriptor

    @classmethod
    def periodic(cls, head: str, block: str) -> "AddressStream":
        """head·block^ω."""
        if not block:
            raise AddressSyntaxError("the repeated block of a stream cannot be empty")
        if any(letter not in LETTERS for letter in head + block):
            raise AddressSyntaxError(f"`{head}({block})` contains letters outside of {{a, b, c}}")
        return cls(itertools.chain(head, itertools.cycle(block)), descriptor=(head, block))

    @classmethod
    def from_letters(cls, letters: Iterable[str]) -> "AddressStream":
        return cls(letters)

    @classmethod
    def from_function(cls, letter_at: Callable[[int], str]) -> "AddressStream":
        return cls(letter_at(i) for i in itertools.count())

    def prefix(self, n: int) -> str:
        if n < 0:
            raise ValueError(f"prefix length must be >= 0, got {n}")
        if len(self._cache) < n:
            with self._lock:
                missing = n - len(self._cache)
                if missing > 0:
                    self._cache += "".join(itertools.islice(self._letters, missing))
                    if len(self._cache) < n:
                        raise ValueError("letter source ended; streams must be infinite")
        return self._cache[:n]

    def letter(self, index: int) -> str:
        return self.prefix(index + 1)[index]

    def iter_letters(self, start: int = 0) -> Iterator[str]:
        for i in itertools.count(start):
            yield self.letter(i)

    @property
    def head(self) -> str:
        return self.letter(0)

    def shift(self) -> "AddressStream":
        """n ↦ letter n+1."""
        descriptor = None
        if self.descriptor is not None:
            head, block = self.descriptor
            descriptor = (head[1:], block) if head else ("", block[1:] + block[:1])
        return AddressStream(self.iter_letters(1), descriptor=descriptor)

    def prepend(self, letter: str) -> "AddressStream":
        letter = str(letter)
        if letter not in LETTERS:
            raise AddressSyntaxError(f"`{letter}` is not one of a, b, c")
        descriptor = None
        if self.descriptor is not None:
            head, block = self.descriptor
            descriptor = (letter + head, block)
        return AddressStream(itertools.chain(letter, self.iter_letters()), descriptor=descriptor)

    def __repr__(self):
        if self.descriptor is not None:
            return f"AddressStream({format_stream(self)!r})"
        return f"AddressStream({self._cache[:16]!r}...)"

    def __str__(self):
        return format_stream(self)


def corner_stream(corner: Union[Corner, str]) -> AddressStream:
    """T_S = a^ω, L_S = b^ω, R_S = c^ω."""
    return AddressStream.periodic("", CORNER_LETTER[str(corner)])


def truncate(p: AddressStream, n: int) -> Address:
    """prefix(n)⊗T; within 2**-n of `p`."""
    if n < 0:
        raise ValueError(f"truncation depth must be >= 0, got {n}")
    return Address(p.prefix(n), Corner.T)


def depth_for_tolerance(tol: float) -> int:
    """The least n >= 2 with 2**(2-n) <= tol."""
    if tol <= 0:
        raise ValueError(f"tolerance must be > 0, got {tol}")
    return max(2, math.ceil(math.log2(1 / tol)) + 2)


def stream_distance(p: AddressStream, q: AddressStream, tol: Optional[float] = None) -> ApproxReal:
    """
    d_S(p, q) to within `tol`.

    Both truncations at depth n are within 2**-n of their streams, so the
    exact distance of the truncations is within 2**(1-n) of d_S; the radius
    reported is 2**(2-n) <= tol.
    """
    tol = settings.DEFAULT_TOLERANCE if tol is None else tol
    n = depth_for_tolerance(tol)
    value = address_distance(truncate(p, n), truncate(q, n))
    return ApproxReal(float(value), 2.0 ** (2 - n))


def _clamped_bounds(approx: ApproxReal) -> Tuple[float, float]:
    return max(0.0, approx.lo), min(1.0, approx.hi)


def tensor_stream_distance(
    m1: str,
    p: AddressStream,
    m2: str,
    q: AddressStream,
    tol: Optional[float] = None,
) -> ApproxReal:
    """
    d_{M⊗S}(m1⊗p, m2⊗q), by evaluating the tensor metric on the lower and
    upper ends of the certified corner distances of p and q.
    """
    corners = [corner_stream(z) for z in CORNERS]
    x_bounds = [_clamped_bounds(stream_distance(p, z, tol)) for z in corners]
    y_bounds = [_clamped_bounds(stream_distance(q, z, tol)) for z in corners]
    same = None
    if str(m1) == str(m2):
        same = _clamped_bounds(stream_distance(p, q, tol))

    # the tensor metric is monotone in every argument
    bounds = []
    for end in (0, 1):
        bounds.append(
            glued_distance(
                str(m1),
                [b[end] for b in x_bounds],
                str(m2),
                [b[end] for b in y_bounds],
                None if same is None else same[end],
                1.0,
            )
            / 2
        )
    return ApproxReal.from_bounds(*bounds)


def _primitive_block(block: str) -> str:
    for period in range(1, len(block) + 1):
        if len(block) % period == 0 and block[:period] * (len(block) // period) == block:
            return block[:period]
    return block


def _normalize_descriptor(head: str, block: str) -> Descriptor:
    block = _primitive_block(block)
    # roll trailing head letters into the block: w·x·(y…x)^ω = w·(x·y…)^ω
    while head and head[-1] == block[-1]:
        head = head[:-1]
        block = block[-1] + block[:-1]
    return head, block


def canonical_tail(descriptor: Descriptor) -> Descriptor:
    """
    The lexicographically least descriptor of the same point of S.

    >>> canonical_tail(("b", "a"))
    ('a', 'b')
    """
    head, block = _normalize_descriptor(*descriptor)
    if len(block) != 1 or not head:
        return head, block
    # w·m·k^ω with m != k is the corner letter(k)-corner of copy w·m: a glued point
    corner = LETTER_CORNER[block]
    partner_letter, partner_corner = GLUED_PAIRS[(head[-1], corner)]
    dual = (head[:-1] + partner_letter, CORNER_LETTER[partner_corner])
    if partner_letter < head[-1]:
        return dual
    return head, block


def streams_equal(p: AddressStream, q: AddressStream) -> bool:
    """Exact equality in S; only decidable for eventually periodic streams."""
    if p.descriptor is None or q.descriptor is None:
        raise ValueError("exact equality needs eventually periodic streams; use stream_distance")
    return canonical_tail(p.descriptor) == canonical_tail(q.descriptor)


def s_structure(p: AddressStream) -> Tuple[str, AddressStream]:
    """
    s: S → M⊗S, p ↦ (head letter, rest).

    Descriptor streams are put in canonical form first, so both expansions
    of a glued point give the same split.
    """
    if p.descriptor is not None:
        p = AddressStream.periodic(*canonical_tail(p.descriptor))
    return p.head, p.shift()


def psi(letter: str, p: AddressStream) -> AddressStream:
    """ψ: M⊗S → S, the inverse of s."""
    return p.prepend(letter)


def parse_stream(text: str) -> AddressStream:
    """
    ``"ab(c)"`` for a·b·c^ω. A finite address such as ``"ab:L"`` is lifted
    to the stream that pads it forever (``"ab(b)"``).
    """
    match = STREAM_PATTERN.match(text)
    if match is not None:
        return AddressStream.periodic(*match.groups())
    try:
        addr = parse_address(text)
    except AddressSyntaxError:
        raise AddressSyntaxError(
            f"`{text}` is not a stream (expected e.g. `ab(c)` or `abc:L`)"
        ) from None
    return AddressStream.periodic(addr.word, CORNER_LETTER[addr.corner.value])


def format_stream(p: AddressStream, depth: Optional[int] = None) -> str:
    if p.descriptor is not None:
        head, block = p.descriptor
        return f"{head}({block})"
    depth = settings.STREAM_SAMPLE_DEPTH if depth is None else depth
    return f"{p.prefix(depth)}..."


def random_stream(rng: np.random.Generator, periodic: Optional[bool] = None) -> AddressStream:
    """
    A random point of S: either head·block^ω with short random head and
    block, or an aperiodic stream with its own child generator.
    """
    if periodic is None:
        periodic = bool(rng.random() < 0.5)
    if periodic:
        head = random_word(rng, int(rng.integers(0, settings.SAMPLE_MAX_LEVEL + 1)))
        block = random_word(rng, int(rng.integers(1, 4)))
        return AddressStream.periodic(head, block)
    child = np.random.default_rng(int(rng.integers(0, 2**32)))
    return AddressStream.from_letters(random_letters(child))


def completion_space(tol: Optional[float] = None) -> TripointedSpace:
    """S with the (midpoint of the certified) stream distance."""

    def metric(p: AddressStream, q: AddressStream) -> float:
        return stream_distance(p, q, tol).value

    def pair_sampler(rng: np.random.Generator):
        p = random_stream(rng)
        shared = int(rng.integers(0, settings.SAMPLE_MAX_LEVEL + 1))
        q = random_stream(rng)
        for letter in reversed(p.prefix(shared)):
            q = q.prepend(letter)
        return p, q

    return TripointedSpace(
        name="S",
        metric=metric,
        distinguished=tuple(corner_stream(z) for z in CORNERS),
        sampler=random_stream,
        contains=lambda point: isinstance(point, AddressStream),
        pair_sampler=pair_sampler,
    )

"""
The Sierpinski gasket 𝕊 in the plane.

σ_a, σ_b, σ_c halve the plane towards the top, left and right vertices
T = (½, √3/2), L = (0, 0), R = (1, 0); 𝕊 is their attractor. Addresses map
into 𝕊 through the contractions, and 𝕊 maps back to M⊗𝕊 through the
barycentric classification `sigma_step`.
"""
import math
from typing import Callable, Dict, NamedTuple, Optional, Tuple, Union

import numpy as np
import pandas as pd
import structlog

from gasket.addresses import Address, enumerate_level, parse_address
from gasket.exceptions import NotInCarrierError
from gasket.metrics import address_distance
from gasket.sampling import get_rng, random_address, random_address_pairs
from gasket.settings import get_settings
from gasket.spaces import Algebra, Coalgebra, TensorPoint, TripointedSpace, level_pairs
from gasket.types.main import CORNERS, LETTERS, Letter, RegularityKind
from gasket.types.reports import DistortionReport, Witness

logger = structlog.get_logger(__name__)
settings = get_settings()

__all__ = [
    "Point2",
    "VERTICES",
    "ifs_map",
    "apply_word",
    "address_to_point",
    "barycentric",
    "from_barycentric",
    "sigma_step",
    "euclidean_distance",
    "gasket_space",
    "tau_algebra",
    "sigma_coalgebra",
    "distortion_report",
]

SQRT3_2 = math.sqrt(3) / 2


class Point2(NamedTuple):
    x: float
    y: float


TOP = Point2(0.5, SQRT3_2)
LEFT = Point2(0.0, 0.0)
RIGHT = Point2(1.0, 0.0)
VERTICES: Dict[str, Point2] = {"T": TOP, "L": LEFT, "R": RIGHT}

# σ_m(p) = p/2 + offset
OFFSETS: Dict[str, Tuple[float, float]] = {
    "a": (0.25, SQRT3_2 / 2),
    "b": (0.0, 0.0),
    "c": (0.5, 0.0),
}


def ifs_map(letter: Union[Letter, str]) -> Callable[[Point2], Point2]:
    dx, dy = OFFSETS[str(letter)]

    def contraction(p: Point2) -> Point2:
        return Point2(p[0] / 2 + dx, p[1] / 2 + dy)

    return contraction


def apply_word(word: str, point: Point2) -> Point2:
    """σ_{m₀}∘⋯∘σ_{m_{n-1}}(point)."""
    x, y = float(point[0]), float(point[1])
    for letter in reversed(word):
        dx, dy = OFFSETS[letter]
        x, y = x / 2 + dx, y / 2 + dy
    return Point2(x, y)


def address_to_point(addr: Address) -> Point2:
    if isinstance(addr, str):
        addr = parse_address(addr)
    return apply_word(addr.word, VERTICES[addr.corner.value])


def euclidean_distance(p, q) -> float:
    return math.hypot(float(p[0]) - float(q[0]), float(p[1]) - float(q[1]))


def barycentric(p) -> Tuple[float, float, float]:
    """(λ_T, λ_L, λ_R) with p = λ_T·T + λ_L·L + λ_R·R."""
    x, y = float(p[0]), float(p[1])
    top = y / SQRT3_2
    right = x - top / 2
    return top, 1.0 - top - right, right


def from_barycentric(weights) -> Point2:
    top, _, right = weights
    return Point2(top / 2 + right, top * SQRT3_2)


def in_triangle(p, tolerance: Optional[float] = None) -> bool:
    tolerance = settings.POINT_TOLERANCE if tolerance is None else tolerance
    return all(weight >= -tolerance for weight in barycentric(p))


def sigma_step(p) -> Tuple[str, Point2]:
    """
    σ: 𝕊 → M⊗𝕊. Picks the copy whose vertex has barycentric weight at least ½
    (the least letter when p lies in two copies) and returns σ_m⁻¹(p).

    Points of the closed triangle that lie in a removed hole go to the copy
    with the largest weight; the preimage is clamped back onto the triangle.
    """
    tolerance = settings.POINT_TOLERANCE
    weights = barycentric(p)
    if any(weight < -tolerance for weight in weights):
        raise NotInCarrierError(p)

    index = next((i for i, weight in enumerate(weights) if weight >= 0.5 - tolerance), None)
    if index is None:
        index = int(np.argmax(weights))
    preimage = [2 * weight for weight in weights]
    preimage[index] -= 1
    preimage = [max(weight, 0.0) for weight in preimage]
    total = sum(preimage)
    preimage = [weight / total for weight in preimage]
    return LETTERS[index], from_barycentric(preimage)


def _sample_point(rng: np.random.Generator) -> Point2:
    return address_to_point(random_address(rng, 12))


def _sample_near_pair(rng: np.random.Generator) -> Tuple[Point2, Point2]:
    ((x, y),) = random_address_pairs(rng, 1, min_level=12, max_level=12)
    return address_to_point(x), address_to_point(y)


def gasket_space() -> TripointedSpace:
    """𝕊 with the Euclidean metric; samples are images of random level-12 addresses."""
    return TripointedSpace(
        name="𝕊",
        metric=euclidean_distance,
        distinguished=(TOP, LEFT, RIGHT),
        sampler=_sample_point,
        contains=in_triangle,
        pair_sampler=_sample_near_pair,
    )


def tau_algebra() -> Algebra:
    """(𝕊, τ) with τ(m⊗p) = σ_m(p)."""

    def structure(point: TensorPoint) -> Point2:
        return ifs_map(point.letter)(point.inner)

    return Algebra(space=gasket_space(), structure=structure, name="tau")


def sigma_coalgebra() -> Coalgebra:
    """(𝕊, σ); σ is Lipschitz but not short."""

    def structure(p: Point2) -> TensorPoint:
        return TensorPoint(*sigma_step(p))

    return Coalgebra(
        space=gasket_space(),
        structure=structure,
        name="gasket",
        regularity=RegularityKind.lipschitz,
    )


def distortion_frame(pairs) -> pd.DataFrame:
    rows = []
    for x, y in pairs:
        colimit = float(address_distance(x, y))
        if colimit == 0:
            continue
        euclid = euclidean_distance(address_to_point(x), address_to_point(y))
        rows.append(
            {"x": str(x), "y": str(y), "d_G": colimit, "euclid": euclid, "ratio": euclid / colimit}
        )
    return pd.DataFrame(rows, columns=["x", "y", "d_G", "euclid", "ratio"])


def distortion_report(
    samples: Optional[int] = None,
    depth: int = 6,
    rng: Optional[np.random.Generator] = None,
    exhaustive: bool = False,
) -> DistortionReport:
    """
    Euclidean distance of address images over d_G, on sampled pairs at `depth`
    (or on every pair of canonical addresses when `exhaustive`).
    """
    if exhaustive:
        pairs = level_pairs(depth)
    else:
        samples = settings.NUM_SAMPLES if samples is None else samples
        pairs = random_address_pairs(rng or get_rng(), samples, min_level=depth, max_level=depth)
    frame = distortion_frame(pairs)

    witness_pair = (Address("b", CORNERS[1]), Address("a", CORNERS[2]))
    witness = distortion_frame([witness_pair]).iloc[0]
    extremes = pd.concat([frame.nsmallest(1, "ratio"), frame.nlargest(1, "ratio")])
    witnesses = [
        Witness(
            left=row.x,
            right=row.y,
            distance=row.d_G,
            image_distance=row.euclid,
            ratio=row.ratio,
        )
        for row in extremes.itertuples()
    ]
    logger.debug(f"distortion at {depth=}: {len(frame)} pairs")
    return DistortionReport(
        samples=len(frame),
        depth=depth,
        min_ratio=float(frame.ratio.min()),
        max_ratio=float(frame.ratio.max()),
        witness_ratio=float(witness.ratio),
        witnesses=witnesses,
    )


def points_frame(depth: int) -> pd.DataFrame:
    """address_to_point over every canonical address of `depth`."""
    rows = []
    for addr in enumerate_level(depth):
        point = address_to_point(addr)
        rows.append({"word": addr.word, "corner": addr.corner.value, "x": point.x, "y": point.y})
    return pd.DataFrame(rows, columns=["word", "corner", "x", "y"])

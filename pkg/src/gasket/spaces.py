"""
Tripointed metric spaces, the functor F = M⊗−, and sample-based checks
of how maps between such spaces behave.

Carriers are presented by callbacks (metric, sampler, membership) rather
than by enumerable sets, since carriers such as segments of the plane are
uncountable; every regularity claim checked here is a sampled certificate.
"""
from typing import Any, Callable, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import structlog
from pydantic import validator

from gasket.addresses import Address, corner_address, enumerate_level, prepend, same_point
from gasket.exceptions import NotTripointedMorphismError
from gasket.metrics import address_distance, check_unit_interval, glued_distance
from gasket.sampling import get_rng, random_address, random_address_pairs
from gasket.settings import get_settings
from gasket.types.main import (
    CORNER_LETTER,
    CORNER_RANK,
    CORNERS,
    GLUED_PAIRS,
    LETTERS,
    RegularityKind,
)
from gasket.types.reports import GasketBaseModel, RegularityReport, Witness
from gasket.utils.formatting import format_point

logger = structlog.get_logger(__name__)
settings = get_settings()

__all__ = [
    "TripointedSpace",
    "TensorPoint",
    "PointedMap",
    "Algebra",
    "Coalgebra",
    "DiscreteWrapper",
    "tensor_space",
    "tensor_map",
    "check_regularity",
    "corner_space",
    "discrete_space",
    "address_space",
    "discrete_address_space",
    "prepend_algebra",
    "discrete_gap",
]

Pair = Tuple[Any, Any]


class TensorPoint(NamedTuple):
    """The class of (letter, inner) in M⊗X."""

    letter: str
    inner: Any

    def __str__(self):
        return f"{self.letter}⊗{format_point(self.inner)}"


class TripointedSpace(GasketBaseModel):
    name: str
    metric: Callable[[Any, Any], float]
    # (T, L, R)
    distinguished: Tuple[Any, Any, Any]
    sampler: Callable[[np.random.Generator], Any]
    contains: Callable[[Any], bool] = lambda point: True
    # draws a pair of nearby points; independent draws from `sampler` when missing
    pair_sampler: Optional[Callable[[np.random.Generator], Pair]] = None
    # the space this one is built from, for tensor and discrete spaces
    base: Optional[Any] = None

    class Config:
        arbitrary_types_allowed = True

    def __repr__(self):
        return f"<TripointedSpace {self.name}>"

    def corner(self, corner) -> Any:
        return self.distinguished[CORNER_RANK[str(corner)]]

    def distance(self, x: Any, y: Any) -> float:
        return self.metric(x, y)

    def equal(self, x: Any, y: Any) -> bool:
        return self.metric(x, y) <= settings.POINT_TOLERANCE

    def corner_distances(self, x: Any) -> List[float]:
        return [self.metric(x, z) for z in self.distinguished]

    def sample(self, rng: np.random.Generator) -> Any:
        return self.sampler(rng)

    def sample_pairs(self, rng: np.random.Generator, count: int) -> List[Pair]:
        pairs = []
        for i in range(count):
            # alternate near pairs with independent ones
            if self.pair_sampler is not None and i % 2 == 0:
                pairs.append(self.pair_sampler(rng))
            else:
                pairs.append((self.sampler(rng), self.sampler(rng)))
        return pairs

    def check_distinguished(self) -> List[str]:
        problems = []
        for i, j in [(0, 1), (0, 2), (1, 2)]:
            d = self.metric(self.distinguished[i], self.distinguished[j])
            if abs(d - 1) > settings.POINT_TOLERANCE:
                problems.append(f"d({CORNERS[i]}, {CORNERS[j]}) = {d}, expected 1")
        return problems


class PointedMap(GasketBaseModel):
    """A function between tripointed spaces that should preserve T, L and R."""

    function: Callable[[Any], Any]
    domain: TripointedSpace
    codomain: TripointedSpace
    name: str = "f"

    class Config:
        arbitrary_types_allowed = True

    def __call__(self, point: Any) -> Any:
        return self.function(point)

    def check_pointed(self) -> "PointedMap":
        corners = zip(CORNERS, self.domain.distinguished, self.codomain.distinguished)
        for z, source, target in corners:
            image = self.function(source)
            if not self.codomain.equal(image, target):
                raise NotTripointedMorphismError(str(z), image, target)
        return self


class Algebra(GasketBaseModel):
    """A space A with a structure map α: M⊗A → A."""

    space: TripointedSpace
    structure: Callable[[TensorPoint], Any]
    name: str = "algebra"

    class Config:
        arbitrary_types_allowed = True


class Coalgebra(GasketBaseModel):
    """A space X with a structure map e: X → M⊗X."""

    space: TripointedSpace
    structure: Callable[[Any], TensorPoint]
    name: str = "coalgebra"
    # what e is known (or claimed) to be; spot-checked by check_regularity
    regularity: Optional[RegularityKind] = None
    lipschitz_constant: Optional[float] = None

    class Config:
        arbitrary_types_allowed = True

    def step(self, point: Any) -> TensorPoint:
        return self.structure(point)


class DiscreteWrapper(TripointedSpace):
    """`base` with its metric replaced by the discrete one (1 between distinct points)."""

    @classmethod
    def wrap(cls, base: TripointedSpace) -> "DiscreteWrapper":
        def metric(x, y):
            return 0.0 if base.equal(x, y) else 1.0

        return cls(
            name=f"{base.name}_disc",
            metric=metric,
            distinguished=base.distinguished,
            sampler=base.sampler,
            contains=base.contains,
            pair_sampler=base.pair_sampler,
            base=base,
        )

    @validator("base")
    def validate_base(cls, val):
        if val is None:
            raise ValueError("a discrete wrapper needs a base space")
        return val


def glue_representative(space: TripointedSpace, point: TensorPoint) -> TensorPoint:
    """
    The least representative of `point` in M⊗space: when the inner point
    is a corner z and (letter, z) is glued to (m, z'), the lexicographically
    smaller of the two (letters a < b < c, then corners T < L < R).
    """
    for z, corner_point in zip(CORNERS, space.distinguished):
        if not space.equal(point.inner, corner_point):
            continue
        key = (point.letter, z.rank)
        partner = GLUED_PAIRS.get((point.letter, z.value))
        if partner is not None and (partner[0], CORNER_RANK[partner[1]]) < key:
            return TensorPoint(partner[0], space.corner(partner[1]))
        return TensorPoint(point.letter, corner_point)
    return point


def tensor_space(space: TripointedSpace) -> TripointedSpace:
    """M⊗space: three half-scaled copies of `space`, glued at a⊗L=b⊗T, a⊗R=c⊗T and b⊗R=c⊗L."""

    def metric(p: TensorPoint, q: TensorPoint) -> float:
        x_dists = space.corner_distances(p.inner)
        y_dists = space.corner_distances(q.inner)
        same = None
        if p.letter == q.letter:
            same = space.metric(p.inner, q.inner)
            check_unit_interval([same])
        check_unit_interval([*x_dists, *y_dists])
        return glued_distance(p.letter, x_dists, q.letter, y_dists, same, 1.0) / 2

    def sampler(rng: np.random.Generator) -> TensorPoint:
        letter = LETTERS[int(rng.integers(0, 3))]
        return glue_representative(space, TensorPoint(letter, space.sampler(rng)))

    def pair_sampler(rng: np.random.Generator) -> Pair:
        letter = LETTERS[int(rng.integers(0, 3))]
        if space.pair_sampler is not None:
            x, y = space.pair_sampler(rng)
        else:
            x, y = space.sampler(rng), space.sampler(rng)
        return (
            glue_representative(space, TensorPoint(letter, x)),
            glue_representative(space, TensorPoint(letter, y)),
        )

    def contains(point: Any) -> bool:
        return (
            isinstance(point, TensorPoint)
            and point.letter in LETTERS
            and space.contains(point.inner)
        )

    distinguished = tuple(
        TensorPoint(CORNER_LETTER[z.value], corner_point)
        for z, corner_point in zip(CORNERS, space.distinguished)
    )
    return TripointedSpace(
        name=f"M⊗{space.name}",
        metric=metric,
        distinguished=distinguished,
        sampler=sampler,
        contains=contains,
        pair_sampler=pair_sampler,
        base=space,
    )


def tensor_map(f: PointedMap) -> PointedMap:
    """Ff(m⊗x) = m⊗f(x)."""
    f.check_pointed()
    domain = tensor_space(f.domain)
    codomain = tensor_space(f.codomain)

    def function(point: TensorPoint) -> TensorPoint:
        return glue_representative(f.codomain, TensorPoint(point.letter, f(point.inner)))

    return PointedMap(function=function, domain=domain, codomain=codomain, name=f"M⊗{f.name}")


def _delta_candidates() -> List[float]:
    return [2.0**-k for k in range(1, 21)]


def check_regularity(
    f: PointedMap,
    kind: Union[RegularityKind, str] = RegularityKind.short,
    samples: Optional[int] = None,
    constant: Optional[float] = None,
    epsilons: Sequence[float] = (0.5, 0.25, 0.125, 0.0625),
    rng: Optional[np.random.Generator] = None,
    extra_pairs: Iterable[Pair] = (),
) -> RegularityReport:
    """
    Sample pairs from `f.domain` and compare d(f x, f y) with d(x, y).

    - short: d(f x, f y) <= d(x, y)
    - lipschitz: d(f x, f y) <= constant * d(x, y)
    - isometry: d(f x, f y) == d(x, y)
    - continuous: for each epsilon, the largest delta in 2^-1..2^-20 such that
      every sampled pair closer than delta has images closer than epsilon

    Pairs at distance zero are left out of the ratio statistics. `extra_pairs`
    are checked before the sampled ones and always listed as witnesses.
    """
    kind = RegularityKind(str(kind))
    if kind == RegularityKind.lipschitz and constant is None:
        raise ValueError("a Lipschitz check needs a constant")
    if kind == RegularityKind.short:
        constant = 1.0
    samples = settings.NUM_SAMPLES if samples is None else samples
    rng = rng or get_rng()
    tolerance = settings.POINT_TOLERANCE

    extra_pairs = list(extra_pairs)
    pairs = extra_pairs + f.domain.sample_pairs(rng, samples)

    rows = []
    for index, (x, y) in enumerate(pairs):
        distance = f.domain.metric(x, y)
        if distance <= tolerance:
            continue
        image_distance = f.codomain.metric(f(x), f(y))
        rows.append(
            {
                "explicit": index < len(extra_pairs),
                "left": x,
                "right": y,
                "distance": distance,
                "image_distance": image_distance,
                "ratio": image_distance / distance,
            }
        )
    frame = pd.DataFrame(
        rows, columns=["explicit", "left", "right", "distance", "image_distance", "ratio"]
    )
    logger.debug(f"checking {kind} on {len(frame)} pairs for `{f.name}`")

    if kind in (RegularityKind.short, RegularityKind.lipschitz):
        violated = frame.image_distance > constant * frame.distance + tolerance
    elif kind == RegularityKind.isometry:
        violated = (frame.image_distance - frame.distance).abs() > tolerance
    else:
        violated = pd.Series(False, index=frame.index)

    deltas = {}
    if kind == RegularityKind.continuous:
        for epsilon in epsilons:
            found = None
            for delta in _delta_candidates():
                close = frame.distance < delta
                if not (frame.image_distance[close] >= epsilon).any():
                    found = delta
                    break
            deltas[str(epsilon)] = found
            if found is None:
                violated = violated | (frame.image_distance >= epsilon)

    frame["violated"] = violated
    ranked = frame.sort_values(
        ["explicit", "violated", "ratio"], ascending=False, kind="mergesort"
    ).head(settings.MAX_WITNESSES)
    witnesses = [
        Witness(
            left=format_point(row.left),
            right=format_point(row.right),
            distance=row.distance,
            image_distance=row.image_distance,
            ratio=row.ratio,
        )
        for row in ranked.itertuples()
    ]

    num_violations = int(violated.sum())
    if num_violations:
        logger.warning(f"`{f.name}` is not {kind} on {num_violations} of {len(frame)} pairs")
    return RegularityReport(
        kind=kind,
        constant=constant,
        samples=len(frame),
        max_ratio=float(frame.ratio.max()) if len(frame) else 0.0,
        min_ratio=float(frame.ratio.min()) if len(frame) else None,
        witnesses=witnesses,
        violations=num_violations,
        deltas=deltas,
    )


# --- built-in spaces ---
def corner_space() -> TripointedSpace:
    """I: the three corners and nothing else."""
    corners = tuple(z.value for z in CORNERS)

    def metric(x, y):
        return 0.0 if str(x) == str(y) else 1.0

    def sampler(rng):
        return corners[int(rng.integers(0, 3))]

    return TripointedSpace(
        name="I",
        metric=metric,
        distinguished=corners,
        sampler=sampler,
        contains=lambda point: str(point) in corners,
    )


def discrete_space(points: Iterable[Any] = ()) -> TripointedSpace:
    """T, L, R plus `points`, all at distance 1 from each other."""
    corners = tuple(z.value for z in CORNERS)
    carrier = list(corners) + [p for p in points if p not in corners]

    def metric(x, y):
        return 0.0 if x == y else 1.0

    def sampler(rng):
        return carrier[int(rng.integers(0, len(carrier)))]

    return TripointedSpace(
        name=f"discrete({len(carrier)})",
        metric=metric,
        distinguished=corners,
        sampler=sampler,
        contains=lambda point: point in carrier,
    )


def address_space(max_level: Optional[int] = None) -> TripointedSpace:
    """G with its colimit metric d_G; samples are canonical addresses."""
    max_level = settings.SAMPLE_MAX_LEVEL if max_level is None else max_level

    def metric(x: Address, y: Address) -> float:
        return float(address_distance(x, y))

    def sampler(rng):
        return random_address(rng, int(rng.integers(0, max_level + 1)))

    def pair_sampler(rng):
        ((x, y),) = random_address_pairs(rng, 1, max_level=max_level)
        return x, y

    return TripointedSpace(
        name="G",
        metric=metric,
        distinguished=tuple(corner_address(z) for z in CORNERS),
        sampler=sampler,
        contains=lambda point: isinstance(point, Address),
        pair_sampler=pair_sampler,
    )


def discrete_address_space(max_level: Optional[int] = None) -> DiscreteWrapper:
    """G_ρ: the addresses of G with the discrete metric."""
    return DiscreteWrapper.wrap(address_space(max_level))


def prepend_algebra(space: Optional[TripointedSpace] = None) -> Algebra:
    """(G, g) or (G_ρ, g): g(m⊗x) = m x."""
    space = space or address_space()

    def structure(point: TensorPoint) -> Address:
        return prepend(point.letter, point.inner)

    return Algebra(space=space, structure=structure, name=f"g on {space.name}")


def structure_map(algebra: Algebra) -> PointedMap:
    """The structure map of `algebra` as a map M⊗A → A."""
    return PointedMap(
        function=algebra.structure,
        domain=tensor_space(algebra.space),
        codomain=algebra.space,
        name=algebra.name,
    )


def discrete_gap(max_level: int = 10) -> pd.DataFrame:
    """
    d_{G_ρ}/d_G on the pair (aⁿ⊗T, aⁿ⊗L) for n = 0..max_level.
    The ratio is 2ⁿ, so the identity G → G_ρ has no Lipschitz constant.
    """
    rows = []
    for level in range(max_level + 1):
        x = corner_address("T", level)
        y = Address("a" * level, CORNERS[1])
        colimit = address_distance(x, y)
        discrete = 0.0 if same_point(x, y) else 1.0
        rows.append(
            {
                "n": level,
                "d_G": float(colimit),
                "d_G_rho": discrete,
                "ratio": discrete / float(colimit),
            }
        )
    return pd.DataFrame(rows, columns=["n", "d_G", "d_G_rho", "ratio"])


def level_pairs(level: int) -> List[Pair]:
    """Every unordered pair of distinct canonical addresses at `level`."""
    addresses = enumerate_level(level)
    return [
        (addresses[i], addresses[j])
        for i in range(len(addresses))
        for j in range(i + 1, len(addresses))
    ]

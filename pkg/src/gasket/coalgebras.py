"""
Built-in coalgebras and the registry behind `load_coalgebra`.

>>> load_coalgebra({"cantor": {"j": 8}})
"""
from fractions import Fraction
from typing import Any, Callable, Dict, Tuple, Type, Union

import numpy as np
import structlog
from pydantic import ValidationError

from gasket.addresses import Address
from gasket.euclidean import SQRT3_2, Point2, euclidean_distance, sigma_coalgebra
from gasket.exceptions import NotInCarrierError, ParameterError
from gasket.settings import get_settings
from gasket.spaces import (
    Coalgebra,
    TensorPoint,
    TripointedSpace,
    address_space,
    corner_space,
    discrete_space,
)
from gasket.types.config import (
    AddressCoalgebraConfig,
    CantorCoalgebraConfig,
    CoalgebraConfig,
    CornerCoalgebraConfig,
    GasketCoalgebraConfig,
    TrivialCoalgebraConfig,
    split_config,
)
from gasket.types.main import CORNER_LETTER, RegularityKind

logger = structlog.get_logger(__name__)
settings = get_settings()

__all__ = [
    "gasket_coalgebra",
    "cantor_space",
    "cantor_step",
    "cantor_coalgebra",
    "corner_coalgebra",
    "trivial_coalgebra",
    "address_coalgebra",
    "register_coalgebra",
    "load_coalgebra",
    "parse_point",
]

APEX = Point2(0.5, SQRT3_2)
ORIGIN = Point2(0, 0)
UNIT = Point2(1, 0)


def gasket_coalgebra() -> Coalgebra:
    """(𝕊, σ)."""
    return sigma_coalgebra()


def _on_segment(point: Any) -> bool:
    return point[1] == 0 and 0 <= point[0] <= 1


def cantor_space() -> TripointedSpace:
    """The segment [0, 1] × {0} plus the apex, with the Euclidean metric."""

    def sampler(rng: np.random.Generator) -> Point2:
        if rng.random() < 0.05:
            return APEX
        return Point2(float(rng.random()), 0.0)

    def pair_sampler(rng: np.random.Generator) -> Tuple[Point2, Point2]:
        x = float(rng.random())
        gap = float(2.0 ** -rng.integers(1, 30)) * (1 if rng.random() < 0.5 else -1)
        y = min(max(x + gap, 0.0), 1.0)
        return Point2(x, 0.0), Point2(y, 0.0)

    def contains(point: Any) -> bool:
        return _on_segment(point) or euclidean_distance(point, APEX) <= settings.POINT_TOLERANCE

    return TripointedSpace(
        name="C",
        metric=euclidean_distance,
        distinguished=(APEX, ORIGIN, UNIT),
        sampler=sampler,
        contains=contains,
        pair_sampler=pair_sampler,
    )


def _unit(value):
    # float rounding in j*x can step just outside [0, 1]
    return min(max(value, 0), 1)


def cantor_step(j: int, point: Any) -> TensorPoint:
    """
    e_j(x, y), in the order of the case table; boundary points take the first
    matching case, which is the least letter.

        a⊗T           y != 0
        b⊗L           x in [0, 1/j]
        b⊗(jx-1)      x in [1/j, 2/j]
        b⊗R (= c⊗L)   x in [2/j, 1-2/j]
        c⊗(jx-(j-2))  x in [1-2/j, 1-1/j]
        c⊗R           x in [1-1/j, 1]

    Exact for `Fraction` coordinates.
    """
    x, y = point
    if y != 0:
        return TensorPoint("a", APEX)
    if not 0 <= x <= 1:
        raise NotInCarrierError(point)
    if x <= Fraction(1, j):
        return TensorPoint("b", ORIGIN)
    if x <= Fraction(2, j):
        return TensorPoint("b", Point2(_unit(j * x - 1), 0))
    if x <= 1 - Fraction(2, j):
        return TensorPoint("b", UNIT)
    if x <= 1 - Fraction(1, j):
        return TensorPoint("c", Point2(_unit(j * x - (j - 2)), 0))
    return TensorPoint("c", UNIT)


def cantor_coalgebra(j: int = 8) -> Coalgebra:
    """The staircase coalgebra (C, e_j); e_j is Lipschitz with constant j/2."""
    if j < 4:
        raise ParameterError(f"j >= 4 required by the construction, got {j}")

    def structure(point: Any) -> TensorPoint:
        return cantor_step(j, point)

    return Coalgebra(
        space=cantor_space(),
        structure=structure,
        name=f"cantor(j={j})",
        regularity=RegularityKind.lipschitz,
        lipschitz_constant=j / 2,
    )


def corner_coalgebra() -> Coalgebra:
    """I with z ↦ letter(z)⊗z; short."""

    def structure(point: str) -> TensorPoint:
        return TensorPoint(CORNER_LETTER[str(point)], str(point))

    return Coalgebra(
        space=corner_space(),
        structure=structure,
        name="corner",
        regularity=RegularityKind.short,
    )


def trivial_coalgebra(size: int = 5) -> Coalgebra:
    """T, L, R and `size` further points, all at distance 1; x ↦ a⊗T off the corners."""
    space = discrete_space(range(size))

    def structure(point: Any) -> TensorPoint:
        if point in ("T", "L", "R"):
            return TensorPoint(CORNER_LETTER[point], point)
        return TensorPoint("a", "T")

    return Coalgebra(
        space=space,
        structure=structure,
        name=f"trivial({size})",
        regularity=RegularityKind.short,
    )


def address_coalgebra(max_level: int = 6) -> Coalgebra:
    """
    G with m w:z ↦ m⊗(w:z), and :z ↦ letter(z)⊗:z on the corners.

    This is g inverted, an isometry onto M⊗G; its final morphism sends w:z to
    the stream w·letter(z)^ω.
    """

    def structure(point: Address) -> TensorPoint:
        if not point.word:
            return TensorPoint(CORNER_LETTER[point.corner.value], point)
        return TensorPoint(point.word[0], Address(point.word[1:], point.corner))

    return Coalgebra(
        space=address_space(max_level),
        structure=structure,
        name="address",
        regularity=RegularityKind.short,
    )


CoalgebraFactory = Callable[..., Coalgebra]

_REGISTRY: Dict[str, Tuple[CoalgebraFactory, Type[CoalgebraConfig]]] = {
    "gasket": (gasket_coalgebra, GasketCoalgebraConfig),
    "cantor": (cantor_coalgebra, CantorCoalgebraConfig),
    "corner": (corner_coalgebra, CornerCoalgebraConfig),
    "trivial": (trivial_coalgebra, TrivialCoalgebraConfig),
    "address": (address_coalgebra, AddressCoalgebraConfig),
}


def register_coalgebra(
    name: str,
    factory: CoalgebraFactory,
    config: Type[CoalgebraConfig] = CoalgebraConfig,
) -> None:
    """Make `factory` loadable by name; its keyword arguments are validated by `config`."""
    if name in _REGISTRY:
        logger.debug(f"replacing coalgebra `{name}`")
    _REGISTRY[name] = (factory, config)


def load_coalgebra(config: Union[str, Dict[str, Any], Coalgebra]) -> Coalgebra:
    """
    A coalgebra from ``"name"`` or ``{"name": {parameters}}``; coalgebras
    built in code pass through unchanged.
    """
    if isinstance(config, Coalgebra):
        return config
    name, params = split_config(config)
    if name not in _REGISTRY:
        raise ParameterError(f"unknown coalgebra `{name}`; known: {sorted(_REGISTRY)}")
    factory, model = _REGISTRY[name]
    try:
        options = model(**params)
    except ValidationError as exc:
        raise ParameterError(f"invalid parameters for `{name}`: {exc}") from exc
    logger.debug(f"loading coalgebra `{name}`", **options.dict())
    return factory(**options.dict())


def parse_point(text: str) -> Any:
    """
    ``"T"``/``"L"``/``"R"``, an integer, or ``"x,y"`` with each coordinate a
    decimal or fraction (``"9/64,0"`` stays exact).
    """
    text = text.strip()
    if text in ("T", "L", "R"):
        return text
    if "," not in text:
        try:
            return int(text)
        except ValueError:
            raise ParameterError(f"`{text}` is not a point") from None
    try:
        x, y = (Fraction(part.strip()) for part in text.split(","))
    except ValueError:
        raise ParameterError(
            f"`{text}` is not a point (expected e.g. `0.25,0` or `9/64,0`)"
        ) from None
    # keep exact coordinates exact; plain decimals become floats
    x = x if "/" in text.split(",")[0] else float(x)
    y = y if "/" in text.split(",")[1] else float(y)
    return Point2(x, y)

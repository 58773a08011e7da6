from fractions import Fraction
from numbers import Real
from typing import Any

import structlog

from gasket.settings import get_settings

logger = structlog.get_logger(__name__)
settings = get_settings()

__all__ = ["format_float", "format_point", "format_distance", "distance_record"]


def format_float(value: Any) -> str:
    return settings.FLOAT_FORMAT % float(value)


def format_point(point: Any) -> str:
    """Short human-readable text for a carrier point, used in report witnesses."""
    # TensorPoint and other named tuples carry their own __str__
    if hasattr(point, "_fields") and type(point).__str__ is not tuple.__str__:
        return str(point)
    if isinstance(point, tuple):
        return "(" + ", ".join(format_point(v) for v in point) + ")"
    if isinstance(point, Fraction):
        return str(point) if point.denominator != 1 else str(point.numerator)
    if isinstance(point, Real) and not isinstance(point, (bool, int)):
        return format_float(point)
    return str(point)


def format_distance(distance) -> str:
    """``k/2^e = decimal`` for an exact distance, ``0`` when it vanishes."""
    if distance == 0:
        return "0"
    return f"{distance} = {distance.decimal()}"


def distance_record(x, y, distance) -> dict:
    return {
        "x": str(x),
        "y": str(y),
        "exact": str(distance),
        "decimal": distance.decimal(),
    }

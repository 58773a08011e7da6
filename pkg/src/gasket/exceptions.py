from typing import Any, Optional

__all__ = [
    "GasketError",
    "AddressSyntaxError",
    "CannotShortenError",
    "EnumerationTooLargeError",
    "OracleTooLargeError",
    "NonDyadicError",
    "NotOneBoundedMetricError",
    "NotTripointedMorphismError",
    "NotInCarrierError",
    "IllDefinedAlgebraError",
    "PropertyViolation",
    "ParameterError",
]


class GasketError(ValueError):
    """Base class for every error raised by gasket operations."""


class AddressSyntaxError(GasketError):
    pass


class CannotShortenError(GasketError):
    def __init__(self, length: int, target: int):
        super().__init__(f"cannot shorten an address of length {length} to {target}")


class EnumerationTooLargeError(GasketError):
    def __init__(self, level: int, cap: int):
        super().__init__(f"enumeration too large: level {level} exceeds cap {cap}")


class OracleTooLargeError(GasketError):
    def __init__(self, level: int, cap: int):
        super().__init__(f"oracle too large: level {level} exceeds cap {cap}")


class NonDyadicError(GasketError):
    pass


class NotOneBoundedMetricError(GasketError):
    def __init__(self, value: Any):
        super().__init__(f"not a 1-bounded metric: distance {value!r} outside [0, 1]")


class NotTripointedMorphismError(GasketError):
    def __init__(self, corner: str, image: Any, expected: Any):
        super().__init__(
            f"not a tripointed morphism: {corner} is sent to {image!r}, expected {expected!r}"
        )
        self.corner = corner
        self.image = image


class NotInCarrierError(GasketError):
    def __init__(self, point: Any, source: Optional[Any] = None):
        msg = f"not in carrier: {point!r}"
        if source is not None:
            msg += f" (image of {source!r})"
        super().__init__(msg)
        self.point = point
        self.source = source


class IllDefinedAlgebraError(GasketError):
    def __init__(self, left: Any, right: Any, distance: float):
        super().__init__(
            f"algebra structure is not well-defined on glued pair {left} ~ {right}: "
            f"images differ by {distance!r}"
        )
        self.witness = (left, right)


class ParameterError(GasketError):
    """A parameter outside the range an operation is defined for."""


class PropertyViolation(GasketError):
    def __init__(self, check: str, details: str):
        super().__init__(f"{check}: {details}")
        self.check = check

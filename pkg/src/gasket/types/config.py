"""
Declarative coalgebra configuration, e.g. ``{"cantor": {"j": 8}}``.
"""
from typing import Any, Dict

import structlog
from pydantic import BaseModel, validator

logger = structlog.get_logger(__name__)

__all__ = [
    "CoalgebraConfig",
    "GasketCoalgebraConfig",
    "CantorCoalgebraConfig",
    "CornerCoalgebraConfig",
    "TrivialCoalgebraConfig",
    "AddressCoalgebraConfig",
]


class CoalgebraConfig(BaseModel):
    class Config:
        extra = "forbid"


class GasketCoalgebraConfig(CoalgebraConfig):
    pass


class CantorCoalgebraConfig(CoalgebraConfig):
    j: int = 8

    @validator("j")
    def validate_j(cls, val):
        if val < 4:
            raise ValueError("j >= 4 required by the construction")
        return val


class CornerCoalgebraConfig(CoalgebraConfig):
    pass


class TrivialCoalgebraConfig(CoalgebraConfig):
    size: int = 5

    @validator("size")
    def validate_size(cls, val):
        if val < 0:
            raise ValueError("size must be >= 0")
        return val


class AddressCoalgebraConfig(CoalgebraConfig):
    max_level: int = 6

    @validator("max_level")
    def validate_max_level(cls, val):
        if val < 0:
            raise ValueError("max_level must be >= 0")
        return val


def split_config(config: Dict[str, Any]) -> tuple:
    """``{"name": {params}}`` -> ``("name", {params})``."""
    if isinstance(config, str):
        return config, {}
    if not isinstance(config, dict) or len(config) != 1:
        raise ValueError(f"expected a single {{name: parameters}} entry, got {config!r}")
    ((name, params),) = config.items()
    return str(name), dict(params or {})

import logging
from contextlib import contextmanager
from functools import lru_cache
from typing import Union

import structlog
from pydantic import BaseSettings, validator

logger = structlog.get_logger(__name__)

__all__ = [
    "get_settings",
    "set_log_level",
    "set_option",
    "settings_context",
]


class Settings(BaseSettings):
    LOG_LEVEL: Union[int, str] = logging.WARNING
    DATETIME_STRING_FORMAT: str = "%Y-%m-%dT%H:%M:%S.%f"

    # caps on the exhaustive operations
    ENUMERATION_MAX_LEVEL: int = 12
    ORACLE_MAX_LEVEL: int = 8
    RENDER_MAX_DEPTH: int = 12
    BLOWUP_MAX_DEPTH: int = 20
    DISTANCE_TABLE_MAX_LEVEL: int = 4

    # random addresses/streams used by samplers
    SAMPLE_MAX_LEVEL: int = 6
    STREAM_SAMPLE_DEPTH: int = 24
    NUM_SAMPLES: int = 1000
    RANDOM_STATE: int = 0

    # certified-interval tolerance for completion-level distances
    DEFAULT_TOLERANCE: float = 2**-10
    # equality tolerance for floating point carriers (R^2, [0,1])
    POINT_TOLERANCE: float = 1e-12

    MAX_WITNESSES: int = 10

    SVG_FILL: str = "#1f2937"
    FLOAT_FORMAT: str = "%.15g"

    @validator(
        "ENUMERATION_MAX_LEVEL",
        "ORACLE_MAX_LEVEL",
        "RENDER_MAX_DEPTH",
        "BLOWUP_MAX_DEPTH",
        "DISTANCE_TABLE_MAX_LEVEL",
        "SAMPLE_MAX_LEVEL",
        "STREAM_SAMPLE_DEPTH",
        "NUM_SAMPLES",
        "MAX_WITNESSES",
        pre=True,
        always=True,
    )
    def validate_non_negative(cls, val, field):
        if int(val) < 0:
            raise ValueError(f"{field.name} must be >= 0")
        return int(val)

    @validator("ORACLE_MAX_LEVEL", always=True)
    def validate_oracle_below_enumeration(cls, val, values):
        enumeration_cap = values.get("ENUMERATION_MAX_LEVEL")
        if enumeration_cap is not None and val > enumeration_cap:
            raise ValueError("ORACLE_MAX_LEVEL must be <= ENUMERATION_MAX_LEVEL")
        return val

    @validator("DEFAULT_TOLERANCE", "POINT_TOLERANCE", pre=True, always=True)
    def validate_positive_tolerance(cls, val, field):
        if float(val) <= 0:
            raise ValueError(f"{field.name} must be > 0")
        return float(val)

    class Config:
        env_prefix = "GASKET_"
        validate_assignment = True
        use_enum_values = True


@lru_cache
def get_settings():
    return Settings()


def set_log_level(level: Union[int, str]):
    logging.getLogger("gasket").setLevel(level)


def set_option(key, value) -> None:
    key = str(key).upper()

    settings = get_settings()
    if key in vars(settings):
        logger.debug(f"setting {key} to {value!r}")
        setattr(settings, key, value)

        if key == "LOG_LEVEL":
            set_log_level(value)
        return
    raise ValueError(f"`{key}` is not a valid setting")


@contextmanager
def settings_context(**option_kwargs):
    """
    Temporarily override settings, restoring only the adjusted ones on exit.

    >>> with settings_context(oracle_max_level=4):
    ...     oracle_distance(x, y)
    """
    settings = get_settings()
    orig_settings = settings.dict()
    option_kwargs = {str(k).upper(): v for k, v in option_kwargs.items()}

    try:
        for setting, value in option_kwargs.items():
            set_option(setting, value)
        yield settings
    finally:
        for setting, value in orig_settings.items():
            if setting in option_kwargs:
                set_option(setting, value)

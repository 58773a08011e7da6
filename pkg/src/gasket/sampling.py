"""
Seeded random sources for the sample-based checks.

Every check takes a `numpy.random.Generator`; when none is given one is
created from `Settings.RANDOM_STATE`, so repeated runs draw the same samples.
"""
from typing import Iterator, List, Optional, Tuple

import numpy as np
import structlog

from gasket.addresses import Address, canonicalize
from gasket.settings import get_settings
from gasket.types.main import CORNERS, LETTERS

logger = structlog.get_logger(__name__)
settings = get_settings()

__all__ = [
    "get_rng",
    "random_word",
    "random_address",
    "random_address_pairs",
    "random_letters",
]


def get_rng(seed: Optional[int] = None) -> np.random.Generator:
    if seed is None:
        seed = settings.RANDOM_STATE
    return np.random.default_rng(seed)


def random_word(rng: np.random.Generator, length: int) -> str:
    indexes = rng.integers(0, len(LETTERS), size=length)
    return "".join(LETTERS[i] for i in indexes)


def random_address(rng: np.random.Generator, level: Optional[int] = None) -> Address:
    """A canonical address of length `level` (random in 0..SAMPLE_MAX_LEVEL when omitted)."""
    if level is None:
        level = int(rng.integers(0, settings.SAMPLE_MAX_LEVEL + 1))
    corner = CORNERS[int(rng.integers(0, len(CORNERS)))]
    return canonicalize(Address(random_word(rng, level), corner))


def random_address_pairs(
    rng: np.random.Generator,
    count: int,
    min_level: int = 0,
    max_level: Optional[int] = None,
) -> List[Tuple[Address, Address]]:
    """
    `count` pairs of canonical addresses sharing a level drawn from
    `min_level`..`max_level`. Half of the pairs share a random prefix,
    so nearby points are covered as well as far-apart ones.
    """
    if max_level is None:
        max_level = settings.SAMPLE_MAX_LEVEL
    pairs = []
    for _ in range(count):
        level = int(rng.integers(min_level, max_level + 1))
        x = random_address(rng, level)
        if level and rng.random() < 0.5:
            shared = int(rng.integers(0, level + 1))
            tail = random_address(rng, level - shared)
            y = canonicalize(Address(x.word[:shared] + tail.word, tail.corner))
        else:
            y = random_address(rng, level)
        pairs.append((x, y))
    logger.debug(f"sampled {len(pairs)} address pairs at levels {min_level}..{max_level}")
    return pairs


def random_letters(rng: np.random.Generator, chunk_size: int = 64) -> Iterator[str]:
    """An endless supply of letters, drawn in chunks."""
    while True:
        yield from random_word(rng, chunk_size)

"""
Brute-force shortest-path oracle for d_{Mⁿ⊗I}.

Mⁿ⊗I is built literally as a quotient: one unit triangle per word of length n
(scaled by 2**-n), glued corner vertices linked at weight 0, and the top-level
copies joined by the direct jump of weight 1 that M×X allows. Distances are
shortest paths on that graph. The construction shares no code with the
closed-form recursion in `gasket.metrics`, so the two can be compared exactly.
"""
import itertools
from functools import lru_cache
from typing import Dict, Tuple

import networkx as nx
import structlog

from gasket.addresses import Address, pad_to_common
from gasket.exceptions import OracleTooLargeError
from gasket.metrics import Dyadic
from gasket.settings import get_settings
from gasket.types.main import CORNER_LETTER, GLUED_PAIRS, LETTERS

logger = structlog.get_logger(__name__)
settings = get_settings()

__all__ = ["gluing_graph", "oracle_distance"]

CORNER_NAMES = ("T", "L", "R")
Vertex = Tuple[str, str]


def gluing_graph(level: int) -> nx.Graph:
    """
    The weighted graph whose vertices are raw tuples (word, corner), word of length `level`.
    Weights are integers in units of 2**-level.
    """
    if level > settings.ORACLE_MAX_LEVEL:
        raise OracleTooLargeError(level, settings.ORACLE_MAX_LEVEL)
    return _build_gluing_graph(level)


@lru_cache(maxsize=None)
def _build_gluing_graph(level: int) -> nx.Graph:
    graph = nx.Graph()
    words = ["".join(letters) for letters in itertools.product(LETTERS, repeat=level)]

    # the innermost copies of I: corners pairwise at distance 1 (one unit at this scale)
    for word in words:
        for z1, z2 in itertools.combinations(CORNER_NAMES, 2):
            graph.add_edge((word, z1), (word, z2), weight=1)

    # m1⊗z1 ~ m2⊗z2 at depth k, where z1 and z2 are corners of the sub-copies below
    for depth in range(level):
        below = level - depth - 1
        for prefix_letters in itertools.product(LETTERS, repeat=depth):
            prefix = "".join(prefix_letters)
            for (m1, z1), (m2, z2) in GLUED_PAIRS.items():
                if m1 > m2:
                    continue
                left = (prefix + m1 + CORNER_LETTER[z1] * below, z1)
                right = (prefix + m2 + CORNER_LETTER[z2] * below, z2)
                graph.add_edge(left, right, weight=0)

    # distinct top-level copies are at distance at most 1 in M×X
    if level > 0:
        unit = 1 << level
        copy_corners: Dict[str, list] = {
            m: [(m + CORNER_LETTER[z] * (level - 1), z) for z in CORNER_NAMES] for m in LETTERS
        }
        for m1, m2 in itertools.combinations(LETTERS, 2):
            for left in copy_corners[m1]:
                for right in copy_corners[m2]:
                    if not graph.has_edge(left, right):
                        graph.add_edge(left, right, weight=unit)

    logger.debug(
        f"built gluing graph at {level=}",
        nodes=graph.number_of_nodes(),
        edges=graph.number_of_edges(),
    )
    return graph


@lru_cache(maxsize=512)
def _distances_from(level: int, source: Vertex) -> Dict[Vertex, int]:
    return nx.single_source_dijkstra_path_length(gluing_graph(level), source, weight="weight")


def oracle_distance(x: Address, y: Address) -> Dyadic:
    """d_G(x, y) by Dijkstra on the gluing graph of their common level."""
    x, y = pad_to_common(x, y)
    level = x.level
    if level > settings.ORACLE_MAX_LEVEL:
        raise OracleTooLargeError(level, settings.ORACLE_MAX_LEVEL)
    source = (x.word, x.corner.value)
    target = (y.word, y.corner.value)
    length = _distances_from(level, source)[target]
    return Dyadic(length, level)

import numpy as np
import pytest

from gasket.addresses import parse_address
from gasket.coalgebras import cantor_coalgebra, corner_coalgebra, gasket_coalgebra
from gasket.sampling import get_rng
from gasket.settings import get_settings
from gasket.spaces import Coalgebra

settings = get_settings()


def pytest_collection_modifyitems(config, items):
    keywordexpr = config.option.keyword
    markexpr = config.option.markexpr
    if keywordexpr or markexpr:
        return

    skip_benchmarks = pytest.mark.skip(
        reason="benchmark marker not selected, use `-m benchmark` to include this test"
    )
    for item in items:
        if "benchmark" in item.keywords:
            item.add_marker(skip_benchmarks)


@pytest.fixture
def rng() -> np.random.Generator:
    return get_rng(0)


@pytest.fixture
def sample_addresses() -> dict:
    return {
        "top": parse_address(":T"),
        "a_top": parse_address("a:T"),
        "a_left": parse_address("a:L"),
        "a_right": parse_address("a:R"),
        "b_top": parse_address("b:T"),
        "b_left": parse_address("b:L"),
        "c_top": parse_address("c:T"),
    }


@pytest.fixture
def sample_gasket_coalgebra() -> Coalgebra:
    return gasket_coalgebra()


@pytest.fixture
def sample_cantor_coalgebra() -> Coalgebra:
    return cantor_coalgebra(8)


@pytest.fixture
def sample_corner_coalgebra() -> Coalgebra:
    return corner_coalgebra()

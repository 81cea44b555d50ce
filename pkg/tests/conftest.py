import random
import sys
from pathlib import Path

import pytest

from qualadapt.algebra import get_algebra

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=20111, help="seed for randomized tests")


@pytest.fixture(scope="session")
def seed(request) -> int:
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed) -> random.Random:
    return random.Random(seed)


@pytest.fixture(scope="session")
def allen():
    return get_algebra("allen")


@pytest.fixture(scope="session")
def indu():
    return get_algebra("indu")


@pytest.fixture(scope="session")
def risotto() -> Path:
    return FIXTURES / "risotto"

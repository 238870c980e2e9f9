"""
Shared fixtures for the test suite
"""
from pathlib import Path

import pytest

from src.cartan import build, parse_algebra_id
from src.coeff import coefficient_field
from src.freealg import FreeAlgebra

GOLDEN_DIR = Path(__file__).parent / "golden"


def pytest_addoption(parser):
    parser.addoption("--update-goldens", action="store_true", default=False,
                     help="rewrite the golden report files instead of comparing")


@pytest.fixture
def update_goldens(request) -> bool:
    return request.config.getoption("--update-goldens")


@pytest.fixture
def golden(update_goldens):
    """Compare text against tests/golden/<name>, or write it with --update-goldens"""
    def check(name: str, text: str) -> None:
        path = GOLDEN_DIR / name
        if update_goldens:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
            return
        if not path.exists():
            pytest.skip(f"golden file {name} not recorded (run with --update-goldens)")
        assert text == path.read_text()
    return check


def cartan(name: str):
    return build(parse_algebra_id(name))


@pytest.fixture
def a11():
    return cartan("a1^1")


@pytest.fixture
def a21():
    return cartan("a2^1")


@pytest.fixture
def a22():
    return cartan("a2^2")


@pytest.fixture
def g21():
    return cartan("g2^1")


@pytest.fixture
def pair_algebra(a21):
    """Free algebra over a2^1 with the parameters of nodes 0 and 1"""
    cf = coefficient_field(("c0", "cb0", "w0", "c1", "cb1", "w1"))
    return FreeAlgebra(a21, cf)

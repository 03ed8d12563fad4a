import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ttp_edo.instance import load_instance  # noqa: E402
from ttp_edo.io import load_snapshot  # noqa: E402

DATA = Path(__file__).parent / "data"
INSTANCE_1 = DATA / "eil51_n50_bounded-strongly-corr_01.ttp"
SEED_1 = DATA / "eil51_n50_bounded-strongly-corr_01.seed.json"

SQUARE_TTP = """\
PROBLEM NAME: square
KNAPSACK DATA TYPE: uncorrelated
DIMENSION: 4
NUMBER OF ITEMS: 3
CAPACITY OF KNAPSACK: 10
MIN SPEED: 0.1
MAX SPEED: 1
RENTING RATIO: 1
EDGE_WEIGHT_TYPE: CEIL_2D
NODE_COORD_SECTION (INDEX, X, Y):
1 0 0
2 1 0
3 1 1
4 0 1
ITEMS SECTION (INDEX, PROFIT, WEIGHT, ASSIGNED NODE NUMBER):
1 100 5 3
2 20 4 2
3 0 3 4
"""


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def instance_1():
    return load_instance(INSTANCE_1)


@pytest.fixture(scope="session")
def seed_1(instance_1):
    return load_snapshot(instance_1, SEED_1)


TINY_TTP = """\
PROBLEM NAME: tiny6
KNAPSACK DATA TYPE: bounded strongly corr
DIMENSION: 6
NUMBER OF ITEMS: 6
CAPACITY OF KNAPSACK: 20
MIN SPEED: 0.1
MAX SPEED: 1
RENTING RATIO: 0.5
EDGE_WEIGHT_TYPE: CEIL_2D
NODE_COORD_SECTION (INDEX, X, Y):
1 0 0
2 10 0
3 20 5
4 15 15
5 5 18
6 -3 9
ITEMS SECTION (INDEX, PROFIT, WEIGHT, ASSIGNED NODE NUMBER):
1 40 8 2
2 35 6 3
3 30 7 4
4 25 4 5
5 20 5 6
6 18 3 3
"""


@pytest.fixture(scope="session")
def tiny():
    """Six-city instance with its exhaustive optimum ``(z*, tour, items)``."""
    import oracles
    from ttp_edo.instance import parse_instance

    inst = parse_instance(TINY_TTP)
    return inst, oracles.best_solution(inst)


_CRITERIA: dict[int, str] = {}


@pytest.fixture(scope="session")
def criterion():
    """Record the outcome line for one acceptance criterion."""

    def record(number: int, passed: bool, detail: str):
        _CRITERIA[number] = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(_CRITERIA[number])
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[number])

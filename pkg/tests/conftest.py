import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from lrsum.hive import Hive
from lrsum.lr_filling import LRFilling, enumerate_fillings
from lrsum.partition import Partition

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

HIVE_ROWS = (
    (0,),
    (10, 18),
    (19, 27, 34),
    (24, 34, 42, 46),
    (27, 38, 48, 54, 57),
    (28, 40, 51, 58, 64, 65),
)
HIVE_TYPE = ((10, 9, 5, 3, 1), (12, 11, 7, 6, 1), (18, 16, 12, 11, 8))

# Skew tableau of shape (11,10,7,5)/(7,4,2,1) with content (8,5,4,2).
TABLEAU_K = ((4,), (2, 4), (1, 1, 3), (1, 0, 1, 2))
TABLEAU_TYPE = ((7, 4, 2, 1), (8, 5, 4, 2), (11, 10, 7, 5))

FIRST_TYPE = ((10, 6, 1), (13, 7, 1), (17, 12, 9))
SECOND_TYPE = ((9, 4), (12, 6), (18, 13))
SUM_TYPE = ((10, 9, 6, 4, 1), (13, 12, 7, 6, 1), (18, 17, 13, 12, 9))


def make_filling(mu, nu, lam, k) -> LRFilling:
    return LRFilling(Partition(tuple(mu)), Partition(tuple(nu)), Partition(tuple(lam)), tuple(tuple(row) for row in k))


# The small pair used throughout: first is [_1],[12], second is [11].
SMALL_FIRST = make_filling((1, 0), (2, 1), (2, 2), ((1,), (1, 1)))
SMALL_SECOND = make_filling((0,), (2,), (2,), ((2,),))
SMALL_TWO = make_filling((2, 1), (2, 1), (3, 3), ((1,), (1, 1)))


@pytest.fixture
def example_hive() -> Hive:
    return Hive(HIVE_ROWS)


@pytest.fixture
def tableau() -> LRFilling:
    return make_filling(*TABLEAU_TYPE, TABLEAU_K)


@pytest.fixture(scope="session")
def first_fillings():
    return enumerate_fillings(*FIRST_TYPE)


@pytest.fixture(scope="session")
def second_fillings():
    return enumerate_fillings(*SECOND_TYPE)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    from test_acceptance import ACCEPTANCE

    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)

import math

import pytest
from hypothesis import settings

from covert_mmwave.channel import AntennaPattern, benchmark, db_to_linear

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def pattern(main_db=15.0, side_db=-5.0, theta_deg=30.0, delta_deg=5.0):
    return AntennaPattern(db_to_linear(main_db), db_to_linear(side_db),
                          math.radians(theta_deg), math.radians(delta_deg))


@pytest.fixture
def bench():
    return benchmark()


@pytest.fixture
def pa5():
    return benchmark().replace(p_a=db_to_linear(5.0))


@pytest.fixture
def theta15():
    return benchmark().replace(alice_second=pattern(theta_deg=15.0))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import pytest

from pstl.primes import sieve
from pstl.expsums import FloorPowerMap

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def table10():
    t = sieve(10)
    return t, FloorPowerMap(t, 1.02)


@pytest.fixture(scope="session")
def table200():
    t = sieve(200)
    return t, FloorPowerMap(t, 1.02)


@pytest.fixture(scope="session")
def table2000():
    t = sieve(2000)
    return t, FloorPowerMap(t, 1.02)


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

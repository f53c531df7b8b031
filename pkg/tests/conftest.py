import pytest

from helpers import backdoor, bow, ex51, frontdoor


@pytest.fixture
def bd():
    return backdoor()


@pytest.fixture
def fd():
    return frontdoor()


@pytest.fixture
def g51():
    return ex51()


@pytest.fixture
def bowg():
    return bow()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

import sys

import pytest

from colorednets.fixtures import vending


@pytest.fixture
def vending_net():
    return vending()[0]


@pytest.fixture
def vending_marking():
    return vending()[1]


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])

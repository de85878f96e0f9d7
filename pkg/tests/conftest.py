import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dioprime.ntheory import sieve_primes  # noqa: E402


@pytest.fixture(scope="session")
def table():
    return sieve_primes(10**6 + 10)


@pytest.fixture(scope="session")
def small_table():
    return sieve_primes(10**4)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

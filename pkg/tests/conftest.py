import pytest

from primezeta.precision import PrecisionPolicy
from primezeta.tables import sieve_primes


@pytest.fixture(scope="session")
def policy30():
    return PrecisionPolicy(30, 15)


@pytest.fixture(scope="session")
def sieve_1e5():
    return sieve_primes(10 ** 5)


@pytest.fixture(scope="session")
def sieve_1e6():
    return sieve_primes(10 ** 6)


@pytest.fixture(scope="session")
def sieve_1e7():
    return sieve_primes(10 ** 7)


@pytest.fixture(scope="session")
def sieve_1e8():
    return sieve_primes(10 ** 8)


ACCEPTANCE_LINES = {}


def record_criterion(number: int, passed: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])

import numpy as np
import pytest

from coiso.arithmetic import QuadraticIrrational, Rational, liouville_constant


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def golden():
    """(sqrt(5) - 1) / 2."""
    return QuadraticIrrational(-1, 5, 2)


@pytest.fixture
def two_thirds():
    return Rational(2, 3)


@pytest.fixture
def liouville():
    return liouville_constant(10, 3)


ACCEPTANCE_RESULTS: dict = {}


@pytest.fixture
def record(request):
    """Store one pass/fail line per acceptance criterion for the terminal summary."""

    def _record(number: int, passed: bool, detail: str):
        ACCEPTANCE_RESULTS[number] = (passed, detail)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")

import math
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from vacuum_index.lattice import validate  # noqa: E402

HEX = ((1.0, 0.0), (0.5, math.sqrt(3) / 2))


@pytest.fixture
def square():
    return validate((1, 0), (0, 1))


@pytest.fixture
def rect():
    return validate((1, 0), (0, 2))


@pytest.fixture
def hexagonal():
    return validate(*HEX)


@pytest.fixture
def hex_exact_ish():
    """Rational lattice with a 60 degree angle is impossible; use 1/2 + 7/8 i instead."""
    return validate((1, 0), (Fraction(1, 2), Fraction(7, 8)))


# ---------------------------------------------------------------- acceptance summary

_ACCEPTANCE: list[tuple[str, str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if item.module.__name__.endswith("test_acceptance") and report.when == "call":
        title = (item.function.__doc__ or item.name).strip().splitlines()[0]
        if hasattr(item, "callspec"):
            title = f"{title} ({item.callspec.id})"
        detail = "; ".join(f"{k}={v}" for k, v in item.user_properties)
        _ACCEPTANCE.append(("PASS" if report.passed else "FAIL", title, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for status, title, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{status} {title}" + (f" [{detail}]" if detail else ""))

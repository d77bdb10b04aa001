import math

import pytest

from hardyring.config import builtin_spec

THETA = 0.423 * math.pi


@pytest.fixture
def cycle4():
    return builtin_spec("cycle4")


@pytest.fixture
def complete4():
    return builtin_spec("complete4")


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

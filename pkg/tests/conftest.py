import random
from fractions import Fraction

import pytest
from hypothesis import settings

settings.register_profile("cellres", deadline=None, derandomize=True)
settings.load_profile("cellres")

WORKED_A = [[1, 0], [1, 0], [0, 1], [2, 1]]
WORKED_B = [0, 0, 0, -1]
WORKED_ALPHA = 2


@pytest.fixture
def worked():
    from cellres.arrangement import DivisorialData

    return DivisorialData(WORKED_A, WORKED_B, WORKED_ALPHA)


@pytest.fixture
def rng():
    return random.Random(20240601)


def frac(s):
    return Fraction(s)


ACCEPTANCE_LINES: list[str] = []


def acceptance_line(number: int, ok: bool, detail: str) -> None:
    line = f"acceptance {number}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture
def report():
    return acceptance_line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import functools
import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

from isocert.catalog import from_catalog  # noqa: E402

# property tests enumerate deterministically: no seed, same examples every run
settings.register_profile("deterministic", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("deterministic")

SMALL_NAMED = ["trivial", "Q8", "A4", "S4", "SL2_3", "extraspecial_27_exp3"]
SMALL_PARAM = [f"Cn:{n}" for n in (1, 2, 3, 4, 6, 8, 9, 12)] + [f"D2n:{n}" for n in (1, 2, 3, 4, 5, 6, 12)]
SMALL = SMALL_NAMED + SMALL_PARAM


@functools.lru_cache(maxsize=None)
def group(name: str):
    return from_catalog(name)


@pytest.fixture
def A4():
    return group("A4")


@pytest.fixture
def S4():
    return group("S4")


@pytest.fixture
def D8():
    return group("D2n:4")


# one line per acceptance criterion, repeated in the terminal summary so it survives output capture
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

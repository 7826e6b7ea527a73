import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from apsimon.core import Scheme

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("fast", max_examples=20, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def schemes(draw, min_mints=1, max_mints=5, max_entry=8, rows=2):
    n = draw(st.integers(min_mints, max_mints))
    cols = []
    for _ in range(n):
        col = draw(st.lists(st.integers(0, max_entry), min_size=rows, max_size=rows)
                   .filter(lambda c: any(c)))
        cols.append(tuple(col))
    return Scheme.from_columns(cols)


def random_scheme(rng: random.Random, n: int, max_entry: int, rows: int = 2) -> Scheme:
    cols = []
    while len(cols) < n:
        col = tuple(rng.randint(0, max_entry) for _ in range(rows))
        if any(col):
            cols.append(col)
    return Scheme.from_columns(cols)


@pytest.fixture
def rng():
    return random.Random(20240601)

import os

import pytest
from hypothesis import strategies as st

from gridlinks.sampler import RandomStream, sample_full_knot, sample_link

FULL_SCALE = os.environ.get("GRIDLINKS_FULL_SCALE") == "1"
full_scale = pytest.mark.skipif(not FULL_SCALE, reason="full-scale sweep; set GRIDLINKS_FULL_SCALE=1")


@st.composite
def link_grids(draw, n_min=2, n_max=14):
    n = draw(st.integers(n_min, n_max))
    seed = draw(st.integers(0, 2**32))
    return sample_link(n, RandomStream(seed, 7))


@st.composite
def knot_loops(draw, n_min=2, n_max=14):
    n = draw(st.integers(n_min, n_max))
    seed = draw(st.integers(0, 2**32))
    return sample_full_knot(n, RandomStream(seed, 11))


@pytest.fixture
def stream():
    return RandomStream(20240601, 0)


# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

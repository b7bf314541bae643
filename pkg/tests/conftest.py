import hypothesis
import numpy as np
import pytest
from hypothesis import strategies as st

from dyadic_weights import WeightTree

np.seterr(all="raise", under="ignore")

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def trees(draw, max_depth=7, lo=0.05, hi=0.95):
    depth = draw(st.integers(1, max_depth))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return WeightTree(depth, rng.uniform(lo, hi, 2**depth - 1))


def random_tree(rng, depth, lo=0.1, hi=0.9):
    return WeightTree(depth, rng.uniform(lo, hi, 2**depth - 1))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

import os
import sys

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from pidlattice import JointDistribution, systems  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def three_outcome():
    return systems.three_outcome()


@pytest.fixture
def xor():
    return systems.xor()


@pytest.fixture
def copies():
    return systems.copies(2)


@pytest.fixture
def parity3():
    return systems.parity(3)


@pytest.fixture
def copy3():
    return systems.copies(3)


@st.composite
def distributions(draw, min_predictors=1, max_predictors=3, max_alphabet=3):
    """Random JointDistribution with a few zero cells."""
    k = draw(st.integers(min_predictors, max_predictors))
    sizes = draw(st.lists(st.integers(2, max_alphabet), min_size=k + 1, max_size=k + 1))
    cells = int(np.prod(sizes))
    weights = draw(
        st.lists(
            st.one_of(st.just(0.0), st.floats(0.01, 1.0)),
            min_size=cells,
            max_size=cells,
        ).filter(lambda w: sum(w) > 0)
    )
    total = sum(weights)
    grid = np.array(weights).reshape(sizes) / total
    pmf = {tuple(map(int, idx)): float(p) for idx, p in np.ndenumerate(grid) if p > 0}
    names = ["S"] + [f"R{i}" for i in range(1, k + 1)]
    return JointDistribution(names, [list(range(s)) for s in sizes], pmf)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in RESULTS:
        line = f"[{'PASS' if ok else 'FAIL'}] {name}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)

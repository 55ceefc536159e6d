import numpy as np
import pytest

from ptychoqudit import random_state

# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_states(dim, count, seed):
    rng = np.random.default_rng(seed)
    return [random_state(dim, rng) for _ in range(count)]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

import math

import numpy as np
import pytest

from ptychoqudit.errors import InvalidConfig
from ptychoqudit.scenarios import paper_state, run_scenario


def test_state_c_phases():
    s = paper_state(5, "c")
    np.testing.assert_allclose(np.angle(s.amplitudes), math.pi * np.array([0, 0.8, -0.8, 0.8, 0]), atol=1e-14)


def test_uniform_states():
    for dim in (5, 12):
        for name in "bc":
            np.testing.assert_allclose(np.abs(paper_state(dim, name).amplitudes), 1 / math.sqrt(dim), atol=1e-15)


def test_d12_a_magnitudes():
    mags = np.abs(paper_state(12, "a").amplitudes)
    np.testing.assert_allclose(mags, 0.039223 * np.arange(1, 13), rtol=2e-5)


def test_random_states_reproducible():
    for dim in (5, 12):
        for name in "ab":
            np.testing.assert_array_equal(paper_state(dim, name).amplitudes, paper_state(dim, name).amplitudes)
    assert not np.allclose(paper_state(5, "a", seed=1).amplitudes, paper_state(5, "a").amplitudes)


def test_unknown():
    with pytest.raises(InvalidConfig):
        paper_state(7, "a")
    with pytest.raises(InvalidConfig):
        paper_state(5, "d")


def test_noisy_run_reasonable():
    run = run_scenario(5, "c", range(5), 16, shots=10 ** 5, data_seed=0)
    assert run.final_fidelity > 0.99

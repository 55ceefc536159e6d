import dataclasses
import math

import numpy as np
import pytest

from ptychoqudit.angular_optics import select_modes
from ptychoqudit.errors import DimensionMismatch, InvalidConfig, NegativeData, NonFiniteData
from ptychoqudit.measurement import fourier_probabilities, full_family, make_family, simulate_dataset
from ptychoqudit.pie import PieConfig, initial_estimate, pie_update, reconstruct
from ptychoqudit.qudit_core import QuditState, fidelity, iqft, random_state, trace_distance

ALPHA = math.pi / 10


def dataset_for(state, family, **kw):
    return simulate_dataset(state, family, select_modes(family.dim), ALPHA, **kw)


class TestInitialEstimate:
    def test_deterministic(self):
        np.testing.assert_array_equal(initial_estimate(7, 3).amplitudes, initial_estimate(7, 3).amplitudes)

    def test_normalized(self):
        assert abs(np.linalg.norm(initial_estimate(9, 1).amplitudes) - 1) < 1e-12

    def test_distinct_seeds(self):
        fids = [fidelity(initial_estimate(5, 2 * k), initial_estimate(5, 2 * k + 1)) for k in range(100)]
        assert max(fids) < 1 - 1e-9


class TestPieUpdate:
    def test_consistent_data_is_fixed_point(self, rng):
        cur = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        mask = np.array([1, 1, 1, 0, 0, 0.0])
        row = np.abs(iqft(mask * cur)) ** 2
        np.testing.assert_allclose(pie_update(cur, mask, row, 1.5), cur, atol=1e-14)

    def test_zero_step(self, rng):
        cur = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        mask = np.array([0, 1, 1, 1, 0.0])
        out = pie_update(cur, mask, rng.random(5), 0.0)
        np.testing.assert_array_equal(out, cur)

    def test_outside_support_untouched(self, rng):
        cur = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        mask = np.array([1, 1, 1, 0, 0.0])
        out = pie_update(cur, mask, rng.random(5), 1.0)
        np.testing.assert_array_equal(out[3:], cur[3:])

    def test_zero_model_component_phase(self):
        cur = np.zeros(4, dtype=complex)
        mask = np.array([1, 1, 0, 0.0])
        row = np.array([1.0, 0, 0, 0])
        out = pie_update(cur, mask, row, 1.0)
        # all model phases taken as 0: revised field is sqrt(row) back-transformed
        np.testing.assert_allclose(out, [0.5, 0.5, 0, 0], atol=1e-15)

    def test_negative(self):
        with pytest.raises(NegativeData):
            pie_update(np.ones(3), np.ones(3), [1, -1, 0], 1.0)
        with pytest.raises(NonFiniteData):
            pie_update(np.ones(3), np.ones(3), [1, np.nan, 0], 1.0)

    def test_full_loop_at_target(self):
        psi = random_state(5, 21)
        fam = full_family(5)
        data = fourier_probabilities(psi, fam)
        cur = psi.amplitudes.copy()
        for j in range(5):
            cur = pie_update(cur, fam.masks[j], data[j], 1.5)
        assert trace_distance(psi, QuditState(cur / np.linalg.norm(cur))) < 1e-7
        np.testing.assert_allclose(cur, psi.amplitudes, atol=1e-14)


class TestConfig:
    @pytest.mark.parametrize("eta", [0.0, -1.0, 2.01])
    def test_eta_range(self, eta):
        with pytest.raises(InvalidConfig):
            PieConfig(eta=eta)

    def test_eta_two_allowed(self):
        assert PieConfig(eta=2.0).eta == 2.0

    def test_iterations(self):
        with pytest.raises(InvalidConfig):
            PieConfig(max_iterations=0)


class TestReconstruct:
    def test_fixed_point_from_target(self):
        psi = random_state(5, 30)
        fam = full_family(5)
        data = dataset_for(psi, fam)
        res = reconstruct(data, fam, PieConfig(initial_state=psi, delta_threshold=1e-10, max_iterations=5))
        assert res.converged and res.iterations_run == 1
        assert res.delta_trace[0] < 1e-10

    def test_fixed_point_up_to_global_phase(self):
        psi = random_state(12, 31)
        fam = make_family(12, (0, 2, 4, 6, 8))
        data = dataset_for(psi, fam)
        start = QuditState(np.exp(0.7j) * psi.amplitudes)
        res = reconstruct(data, fam, PieConfig(initial_state=start, max_iterations=3))
        assert max(res.delta_trace) < 1e-10

    def test_global_phase_equivalence(self):
        psi = random_state(5, 32)
        fam = full_family(5)
        data = dataset_for(psi, fam)
        y0 = initial_estimate(5, 4)
        a = reconstruct(data, fam, PieConfig(initial_state=y0, max_iterations=4))
        b = reconstruct(data, fam, PieConfig(initial_state=QuditState(1j * y0.amplitudes), max_iterations=4))
        assert fidelity(a.estimate, b.estimate) == pytest.approx(1, abs=1e-10)

    def test_data_scale_invariance(self):
        psi = random_state(5, 33)
        fam = full_family(5)
        data = dataset_for(psi, fam)
        scaled = dataclasses.replace(data, values=data.values * 1234.5)
        cfg = PieConfig(seed=3, max_iterations=6)
        a = reconstruct(data, fam, cfg).estimate
        b = reconstruct(scaled, fam, cfg).estimate
        np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=1e-10)

    def test_abstract_and_physical_give_same_estimate(self):
        psi = random_state(5, 34)
        fam = full_family(5)
        cfg = PieConfig(seed=1, max_iterations=8)
        a = reconstruct(dataset_for(psi, fam), fam, cfg).estimate
        b = reconstruct(simulate_dataset(psi, fam, backend="abstract"), fam, cfg).estimate
        np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=1e-10)

    def test_traces_and_threshold(self):
        psi = random_state(5, 35)
        fam = full_family(5)
        res = reconstruct(dataset_for(psi, fam), fam,
                          PieConfig(seed=2, max_iterations=100, delta_threshold=1e-9, track_target=psi))
        assert res.converged
        assert len(res.delta_trace) == res.iterations_run == len(res.fidelity_trace)
        assert np.all(np.isfinite(res.delta_trace)) and res.delta_trace[-1] < 1e-9
        assert abs(np.linalg.norm(res.estimate.amplitudes) - 1) < 1e-12
        assert res.final_fidelity >= 1 - 1e-6

    def test_fixed_iteration_mode(self):
        psi = random_state(5, 36)
        fam = full_family(5)
        res = reconstruct(dataset_for(psi, fam), fam, PieConfig(max_iterations=3))
        assert res.iterations_run == 3 and not res.converged and res.fidelity_trace is None

    def test_estimate_phase_fixed(self):
        psi = random_state(5, 37)
        fam = full_family(5)
        est = reconstruct(dataset_for(psi, fam), fam, PieConfig(max_iterations=8)).estimate
        assert est.amplitudes[0].imag == 0 and est.amplitudes[0].real > 0

    def test_eta_two_fixed_point_and_finite(self):
        # eta = 2 reflects the masked wave through the magnitude constraint;
        # exact data must still be a fixed point and iterates must stay bounded
        fam = full_family(5)
        for k in range(5):
            psi = random_state(5, 100 + k)
            data = dataset_for(psi, fam)
            res = reconstruct(data, fam, PieConfig(eta=2.0, initial_state=psi, max_iterations=3))
            assert max(res.delta_trace) < 1e-10
            res = reconstruct(data, fam, PieConfig(eta=2.0, seed=k, max_iterations=50))
            assert np.all(np.isfinite(res.delta_trace))

    def test_errors(self):
        psi = random_state(5, 38)
        fam = full_family(5)
        data = dataset_for(psi, fam)
        with pytest.raises(DimensionMismatch):
            reconstruct(data, make_family(5, (0, 1, 2)), PieConfig())
        bad = data.values.copy()
        bad[0, 0] = np.inf
        with pytest.raises(NonFiniteData):
            reconstruct(dataclasses.replace(data, values=bad), fam, PieConfig())
        bad[0, 0] = -1
        with pytest.raises(NegativeData):
            reconstruct(dataclasses.replace(data, values=bad), fam, PieConfig())
        with pytest.raises(NonFiniteData):
            reconstruct(dataclasses.replace(data, values=np.zeros((5, 5))), fam, PieConfig())


@pytest.mark.parametrize("dim", [4, 5, 8, 12])
def test_convergence_rate_random_states(dim):
    """At least 99% of 200 random states reach F >= 1 - 1e-6 within 50
    iterations with the J = D family and noiseless data."""
    fam = full_family(dim)
    rng = np.random.default_rng(7000 + dim)
    successes = 0
    for k in range(200):
        psi = random_state(dim, rng)
        res = reconstruct(dataset_for(psi, fam), fam, PieConfig(seed=k, max_iterations=50, track_target=psi))
        successes += max(res.fidelity_trace) >= 1 - 1e-6 and res.final_fidelity >= 1 - 1e-6
    assert successes >= 198, f"D={dim}: {successes}/200 runs converged"

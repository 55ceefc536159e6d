import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptychoqudit.errors import DimensionMismatch, DimensionTooSmall, NotNormalized, ZeroVector
from ptychoqudit.qudit_core import (
    TOL_ALGEBRAIC,
    QuditState,
    basis_state,
    compare,
    fidelity,
    fix_global_phase,
    fourier_basis_state,
    fourier_matrix,
    iqft,
    normalize,
    qft,
    random_state,
    trace_distance,
)


def brute_qft(vec):
    d = len(vec)
    return np.array([sum(cmath.exp(2j * math.pi * n * k / d) * vec[n] for n in range(d)) / math.sqrt(d)
                     for k in range(d)])


class TestNormalize:
    def test_already_normalized(self):
        s = normalize([1, 0, 0, 0, 0])
        np.testing.assert_array_equal(s.amplitudes, [1, 0, 0, 0, 0])

    def test_symmetric_pair(self):
        s = normalize([1, 1])
        np.testing.assert_allclose(s.amplitudes, [1 / math.sqrt(2)] * 2, atol=1e-15)

    def test_hand_norm(self):
        s = normalize([3 + 4j, 0])
        np.testing.assert_allclose(s.amplitudes, [(3 + 4j) / 5, 0], atol=1e-15)

    def test_zero_vector(self):
        with pytest.raises(ZeroVector):
            normalize([0, 0, 0])

    def test_too_small(self):
        with pytest.raises(DimensionTooSmall):
            normalize([1])

    def test_constructor_rejects_unnormalized(self):
        with pytest.raises(NotNormalized):
            QuditState([1, 1])

    def test_immutable(self):
        s = normalize([1, 2, 3])
        with pytest.raises(ValueError):
            s.amplitudes[0] = 0

    @given(st.lists(st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False),
                    min_size=2, max_size=16))
    def test_unit_norm(self, raw):
        if np.linalg.norm(raw) < 1e-100:
            return
        s = normalize(raw)
        assert abs(np.linalg.norm(s.amplitudes) - 1) < TOL_ALGEBRAIC
        assert s.dim == len(raw)


class TestQft:
    def test_basis_zero(self):
        out = qft(basis_state(0, 3))
        np.testing.assert_allclose(out.amplitudes, [1 / math.sqrt(3)] * 3, atol=1e-15)

    def test_inverse_of_uniform(self):
        out = iqft(normalize([1, 1, 1]))
        np.testing.assert_allclose(out.amplitudes, [1, 0, 0], atol=1e-15)

    def test_matches_double_loop(self):
        s = random_state(7, 3)
        np.testing.assert_allclose(qft(s).amplitudes, brute_qft(s.amplitudes), atol=1e-14)

    def test_column_is_fourier_state(self):
        d = 6
        for n in range(d):
            expected = [cmath.exp(2j * math.pi * n * k / d) / math.sqrt(d) for k in range(d)]
            np.testing.assert_allclose(fourier_basis_state(n, d).amplitudes, expected, atol=1e-14)

    def test_iqft_gives_fourier_amplitudes(self):
        s = random_state(5, 4)
        overlaps = [np.vdot(fourier_basis_state(n, 5).amplitudes, s.amplitudes) for n in range(5)]
        np.testing.assert_allclose(iqft(s.amplitudes), overlaps, atol=1e-14)

    @pytest.mark.parametrize("dim", range(2, 33))
    def test_unitary(self, dim):
        f = fourier_matrix(dim)
        np.testing.assert_allclose(f.conj().T @ f, np.eye(dim), atol=TOL_ALGEBRAIC, rtol=0)

    @pytest.mark.parametrize("dim", [2, 5, 12, 32])
    def test_round_trip_and_norm(self, dim, rng):
        x = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        assert abs(np.linalg.norm(qft(x)) - np.linalg.norm(x)) < TOL_ALGEBRAIC * np.linalg.norm(x)
        np.testing.assert_allclose(iqft(qft(x)), x, atol=TOL_ALGEBRAIC)

    @pytest.mark.parametrize("dim", [3, 8, 17])
    def test_agrees_with_numpy_fft(self, dim, rng):
        x = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        np.testing.assert_allclose(qft(x), np.fft.ifft(x, norm="ortho"), atol=1e-13)
        np.testing.assert_allclose(iqft(x), np.fft.fft(x, norm="ortho"), atol=1e-13)

    def test_rows_of_2d_input(self, rng):
        x = rng.standard_normal((3, 4)) + 0j
        np.testing.assert_allclose(qft(x), np.array([qft(r) for r in x]), atol=1e-15)


class TestMetrics:
    def test_identical(self):
        s = random_state(4, 1)
        assert trace_distance(s, s) == pytest.approx(0, abs=1e-7)
        assert fidelity(s, s) == pytest.approx(1, abs=1e-15)

    def test_orthogonal(self):
        a, b = basis_state(0, 3), basis_state(1, 3)
        assert trace_distance(a, b) == 1.0
        assert fidelity(a, b) == 0.0

    def test_hand_inner_product(self):
        a = basis_state(0, 2)
        b = normalize([1, 1])
        assert trace_distance(a, b) == pytest.approx(math.sqrt(0.5), abs=1e-15)

    @pytest.mark.parametrize("theta", [0.0, 0.3, math.pi, -2.0])
    def test_global_phase_invariance(self, theta):
        a = random_state(6, 9)
        b = QuditState(np.exp(1j * theta) * a.amplitudes)
        assert fidelity(a, b) == pytest.approx(1, abs=1e-14)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            fidelity(basis_state(0, 2), basis_state(0, 3))
        with pytest.raises(DimensionMismatch):
            trace_distance(basis_state(0, 2), basis_state(0, 3))

    @pytest.mark.parametrize("dim", range(2, 33))
    def test_delta_squared_plus_f(self, dim):
        rng = np.random.default_rng(dim)
        for _ in range(20):
            a, b = random_state(dim, rng), random_state(dim, rng)
            r = compare(a, b)
            assert abs(r.trace_distance ** 2 + r.fidelity - 1) < TOL_ALGEBRAIC
            assert fidelity(a, b) == fidelity(b, a)
            assert 0 <= r.fidelity <= 1 and 0 <= r.trace_distance <= 1


class TestFixGlobalPhase:
    def test_example(self):
        s = QuditState(np.array([1j, 1]) / math.sqrt(2))
        np.testing.assert_allclose(fix_global_phase(s).amplitudes,
                                   np.array([1, -1j]) / math.sqrt(2), atol=1e-15)

    def test_skips_negligible_leading_entries(self):
        s = normalize([1e-12, -2j, 1])
        out = fix_global_phase(s)
        assert out.amplitudes[1].imag == 0 and out.amplitudes[1].real > 0

    def test_canonical_unchanged(self):
        s = normalize([1, 1j, -1])
        np.testing.assert_array_equal(fix_global_phase(s).amplitudes, s.amplitudes)

    def test_fidelity_preserving_and_idempotent(self):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            s = random_state(int(rng.integers(2, 17)), rng)
            once = fix_global_phase(s)
            assert fidelity(s, once) == pytest.approx(1, abs=1e-14)
            np.testing.assert_array_equal(fix_global_phase(once).amplitudes, once.amplitudes)


class TestSerialization:
    def test_json_round_trip(self):
        s = random_state(5, 0)
        back = QuditState.from_json(s.to_json())
        np.testing.assert_array_equal(back.amplitudes, s.amplitudes)

    def test_wire_format(self):
        d = normalize([1, 1j]).to_dict()
        assert set(d) == {"dim", "re", "im"}
        assert d["dim"] == 2

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatch):
            QuditState.from_dict({"dim": 3, "re": [1, 0], "im": [0, 0]})

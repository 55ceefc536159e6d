"""Pure qudit states, the D-dimensional quantum Fourier transform and
state-comparison metrics.

Conventions
-----------
The Fourier basis is ``|f_n> = sum_k exp(+2j*pi*n*k/D) |k> / sqrt(D)``, so the
forward transform ``qft`` multiplies by the matrix whose column ``n`` is
``|f_n>``.  The Fourier-basis amplitudes of a vector, ``<f_n|v>``, are then
given by the adjoint transform ``iqft``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .errors import DimensionMismatch, DimensionTooSmall, NotNormalized, ZeroVector

#: Tolerance used for algebraic identities (unitarity, norms, metric identities).
TOL_ALGEBRAIC = 1e-12
#: Tolerance used for end-to-end reconstruction fidelities.
TOL_END_TO_END = 1e-6
#: Magnitude below which a component is treated as zero when fixing the phase.
PHASE_FLOOR = 1e-10
# constructor check; looser than TOL_ALGEBRAIC so JSON round trips survive
_NORM_CHECK = 1e-9


@dataclass(frozen=True, eq=False)
class QuditState:
    """Normalized pure state of a D-level system in the canonical basis.

    Parameters
    ----------
    amplitudes : array_like of complex
        The D amplitudes ``C_n``.  Must already be normalized; use
        :func:`normalize` to build a state from raw coefficients.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size < 2:
            raise DimensionTooSmall(f"qudit dimension must be >= 2, got {amps.size}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > _NORM_CHECK:
            raise NotNormalized(f"amplitudes have norm {norm!r}; use normalize()")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def __len__(self):
        return self.dim

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.amplitudes.copy()
        return self.amplitudes.astype(dtype)

    def __repr__(self):
        return f"QuditState(dim={self.dim}, amplitudes={np.array2string(self.amplitudes, precision=4)})"

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "re": self.amplitudes.real.tolist(),
            "im": self.amplitudes.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QuditState":
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data["im"], dtype=float)
        if re.shape != im.shape:
            raise DimensionMismatch("'re' and 'im' have different lengths")
        if "dim" in data and int(data["dim"]) != re.size:
            raise DimensionMismatch(f"dim={data['dim']} but {re.size} amplitudes given")
        return cls(re + 1j * im)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "QuditState":
        return cls.from_dict(json.loads(text))


ArrayOrState = Union[QuditState, np.ndarray]


def normalize(raw) -> QuditState:
    """Return the state proportional to ``raw`` with unit Euclidean norm.

    Raises
    ------
    DimensionTooSmall
        If fewer than two amplitudes are given.
    ZeroVector
        If every entry is zero.
    """
    vec = np.asarray(raw, dtype=np.complex128).reshape(-1)
    if vec.size < 2:
        raise DimensionTooSmall(f"qudit dimension must be >= 2, got {vec.size}")
    norm = np.linalg.norm(vec)
    if norm == 0.0 or not np.isfinite(norm):
        raise ZeroVector("cannot normalize a zero (or non-finite) vector")
    return QuditState(vec / norm)


def basis_state(n: int, dim: int) -> QuditState:
    """Canonical basis state ``|n>``."""
    if dim < 2:
        raise DimensionTooSmall(f"qudit dimension must be >= 2, got {dim}")
    vec = np.zeros(dim, dtype=np.complex128)
    vec[n] = 1.0
    return QuditState(vec)


@lru_cache(maxsize=64)
def _fourier_matrix_cached(dim: int) -> np.ndarray:
    k = np.arange(dim)
    mat = np.exp(2j * np.pi * np.outer(k, k) / dim) / np.sqrt(dim)
    mat.flags.writeable = False
    return mat


def fourier_matrix(dim: int) -> np.ndarray:
    """D x D matrix with entry ``(k, n) = exp(2j*pi*n*k/D)/sqrt(D)``.

    Column ``n`` is the Fourier-basis state ``|f_n>``.  The returned array is
    read-only and shared between callers.
    """
    if dim < 2:
        raise DimensionTooSmall(f"qudit dimension must be >= 2, got {dim}")
    return _fourier_matrix_cached(int(dim))


def fourier_basis_state(n: int, dim: int) -> QuditState:
    return QuditState(fourier_matrix(dim)[:, n])


def _apply(mat_of_dim, x: ArrayOrState) -> ArrayOrState:
    if isinstance(x, QuditState):
        out = mat_of_dim(x.dim) @ x.amplitudes
        # unitary up to rounding; renormalize so the result passes the type check
        return QuditState(out / np.linalg.norm(out))
    vec = np.asarray(x, dtype=np.complex128)
    return mat_of_dim(vec.shape[-1]) @ vec if vec.ndim == 1 else vec @ mat_of_dim(vec.shape[-1]).T


def qft(x: ArrayOrState) -> ArrayOrState:
    """Apply the quantum Fourier transform.

    Accepts a :class:`QuditState` (returns a state) or a raw complex array
    (returns an array; for 2-D input each row is transformed).
    """
    return _apply(fourier_matrix, x)


def iqft(x: ArrayOrState) -> ArrayOrState:
    """Inverse of :func:`qft`.  Component ``n`` of ``iqft(v)`` is ``<f_n|v>``."""
    return _apply(lambda d: fourier_matrix(d).conj().T, x)


def _overlap(a: QuditState, b: QuditState) -> complex:
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions differ: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: QuditState, b: QuditState) -> float:
    """Squared overlap ``|<a|b>|**2``, clamped to [0, 1]."""
    f = abs(_overlap(a, b)) ** 2
    return float(min(max(f, 0.0), 1.0))


def trace_distance(a: QuditState, b: QuditState) -> float:
    """Trace distance between two pure states, ``sqrt(1 - |<a|b>|**2)``.

    Evaluated as the norm of the part of ``b`` orthogonal to ``a``, which is
    the same quantity for normalized states but does not lose precision to
    cancellation when the states are close (the direct formula bottoms out
    near 1e-8).
    """
    ov = _overlap(a, b)
    resid = b.amplitudes - ov * a.amplitudes
    return float(min(np.linalg.norm(resid), 1.0))


@dataclass(frozen=True)
class ComparisonReport:
    trace_distance: float
    fidelity: float


def compare(a: QuditState, b: QuditState) -> ComparisonReport:
    return ComparisonReport(trace_distance=trace_distance(a, b), fidelity=fidelity(a, b))


def fix_global_phase(state: QuditState) -> QuditState:
    """Rotate the global phase so the first non-negligible amplitude is real
    and positive."""
    amps = state.amplitudes
    idx = int(np.argmax(np.abs(amps) > PHASE_FLOOR))
    lead = amps[idx]
    out = amps * np.exp(-1j * np.angle(lead))  # exactly 1 when already canonical
    out[idx] = abs(lead)
    return QuditState(out)


def random_state(dim: int, rng: np.random.Generator | int | None = None) -> QuditState:
    """Random state with i.i.d. standard-normal real and imaginary parts.

    This is the unitarily invariant (Haar) distribution on pure states.
    """
    rng = np.random.default_rng(rng)
    return normalize(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))

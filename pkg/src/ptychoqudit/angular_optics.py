"""Angular-slit encoding of photonic qudits and its OAM representation.

A photon passing through ``D`` angular slits of width ``alpha`` centred at
``n * beta`` (``beta = 2*pi/D``) is left in the qudit state with amplitudes
``C_n ~ c_n g(n*beta)``.  In the orbital-angular-momentum basis each slit
state contributes ``alpha/sqrt(2*pi) * sinc(l*alpha/2) * exp(-1j*l*n*beta)``,
and a Fourier-basis state ``|f_n>`` only populates modes ``l = n (mod D)``.
Measuring ``D`` such modes therefore realises the Fourier-basis measurement,
up to the diffraction envelope ``sinc**2(l*alpha/2)`` which is divided out
afterwards (:func:`compensate`).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DimensionMismatch,
    DimensionTooSmall,
    EnvelopeZero,
    IndexOutOfRange,
    InvalidAperture,
    InvalidModePlan,
)
from .qudit_core import TOL_ALGEBRAIC, QuditState, normalize

# |sinc| below this counts as an envelope null
ENVELOPE_FLOOR = 1e-12


def slit_period(dim: int) -> float:
    return 2.0 * np.pi / dim


def _check_alpha(alpha: float, dim: int) -> None:
    if not (0.0 < alpha < slit_period(dim)):
        raise InvalidAperture(
            f"slit width alpha={alpha!r} must lie in (0, 2*pi/D) = (0, {slit_period(dim)!r})"
        )


@dataclass(frozen=True, eq=False)
class ApertureSpec:
    """Complex transmission of a symmetric array of ``dim`` angular slits.

    Parameters
    ----------
    dim : int
        Number of slits (qudit dimension).
    alpha : float
        Angular slit width in radians, ``0 < alpha < 2*pi/dim``.
    modulations : array_like of complex
        Per-slit transmission coefficients ``c_n`` with ``|c_n| <= 1``.
    illumination : array_like of complex, optional
        Incident field sampled at the slit centres, ``g(n*beta)``.  Defaults to
        a plane wave (all ones).
    """

    dim: int
    alpha: float
    modulations: np.ndarray
    illumination: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.dim < 2:
            raise DimensionTooSmall(f"aperture needs at least 2 slits, got {self.dim}")
        _check_alpha(self.alpha, self.dim)
        c = np.array(self.modulations, dtype=np.complex128).reshape(-1)
        if c.size != self.dim:
            raise DimensionMismatch(f"{c.size} modulations for {self.dim} slits")
        if np.any(np.abs(c) > 1.0 + TOL_ALGEBRAIC):
            raise InvalidAperture("slit modulations must satisfy |c_n| <= 1")
        if self.illumination is None:
            g = np.ones(self.dim, dtype=np.complex128)
        else:
            g = np.array(self.illumination, dtype=np.complex128).reshape(-1)
            if g.size != self.dim:
                raise DimensionMismatch(f"{g.size} illumination samples for {self.dim} slits")
        c.flags.writeable = False
        g.flags.writeable = False
        object.__setattr__(self, "modulations", c)
        object.__setattr__(self, "illumination", g)

    @property
    def beta(self) -> float:
        return slit_period(self.dim)

    def transmission(self, phi) -> np.ndarray:
        """Evaluate the transmission function ``T(phi)`` on angles in [-pi, pi)."""
        phi = np.asarray(phi, dtype=float)
        out = np.zeros(phi.shape, dtype=np.complex128)
        for n, cn in enumerate(self.modulations):
            offset = np.angle(np.exp(1j * (phi - n * self.beta)))  # wrap to (-pi, pi]
            out = np.where(np.abs(offset) <= self.alpha / 2, out + cn, out)
        return out


def prepare_state(aperture: ApertureSpec) -> QuditState:
    """Qudit state transmitted by ``aperture``: ``C_n ~ c_n * g(n*beta)``."""
    return normalize(aperture.modulations * aperture.illumination)


def sinc_envelope(ell, alpha: float):
    """Unnormalized sinc ``sin(x)/x`` at ``x = ell*alpha/2``.

    ``ell = 0`` returns exactly 1.  Accepts scalars or arrays.
    """
    x = np.asarray(ell, dtype=float) * (alpha / 2.0)
    # np.sinc is sin(pi t)/(pi t) and handles t = 0 exactly
    out = np.sinc(x / np.pi)
    return float(out) if out.ndim == 0 else out


def default_window(alpha: float) -> Tuple[int, int]:
    """Central lobe of the sinc envelope, ``|l| <= ceil(2*pi/alpha)``."""
    half = math.ceil(2.0 * np.pi / alpha - 1e-9)
    return -half, half


@dataclass(frozen=True, eq=False)
class OamSpectrum:
    """Amplitudes ``d_l`` of a state on a contiguous window of OAM modes."""

    ell: np.ndarray
    amplitudes: np.ndarray
    alpha: float = field(default=float("nan"))

    @property
    def ell_min(self) -> int:
        return int(self.ell[0])

    @property
    def ell_max(self) -> int:
        return int(self.ell[-1])

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def as_dict(self) -> dict:
        return {int(l): complex(d) for l, d in zip(self.ell, self.amplitudes)}

    def __getitem__(self, ell: int) -> complex:
        if not self.ell_min <= ell <= self.ell_max:
            raise KeyError(ell)
        return complex(self.amplitudes[ell - self.ell_min])

    def normalized_distribution(self) -> np.ndarray:
        """``|d_l|**2 / d_max`` with ``d_max = max|d_l|**2 / sinc**2(l_max*alpha/2)``.

        With this normalization the distribution touches the envelope
        ``sinc**2(l*alpha/2)`` at its most probable mode.
        """
        prob = self.probabilities
        i = int(np.argmax(prob))
        d_max = prob[i] / sinc_envelope(self.ell[i], self.alpha) ** 2
        return prob / d_max

    def rows(self):
        env = sinc_envelope(self.ell, self.alpha) ** 2
        norm = self.normalized_distribution()
        for l, d, p, e, q in zip(self.ell, self.amplitudes, self.probabilities, env, norm):
            yield int(l), d.real, d.imag, p, q, e

    def to_csv(self, fh, header_comments: Iterable[str] = ()) -> None:
        """Write columns ``ell, re, im, prob, normalized_prob, envelope``.

        ``fh`` is an open text file.
        """
        for line in header_comments:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["ell", "re", "im", "prob", "normalized_prob", "envelope"])
        for row in self.rows():
            w.writerow([row[0]] + [repr(float(v)) for v in row[1:]])


def oam_amplitudes(amplitudes, alpha: float, ell) -> np.ndarray:
    """Closed-form ``d_l`` for a (possibly unnormalized) slit-basis vector.

    ``amplitudes`` may be 1-D (one vector) or 2-D (one vector per row); the
    result has ``ell`` appended as the last axis.
    """
    amps = np.asarray(amplitudes, dtype=np.complex128)
    dim = amps.shape[-1]
    ell = np.asarray(ell)
    beta = slit_period(dim)
    phases = np.exp(-1j * beta * np.outer(np.arange(dim), ell.reshape(-1)))  # (D, L)
    sums = amps @ phases
    env = (alpha / np.sqrt(2.0 * np.pi)) * sinc_envelope(ell.reshape(-1), alpha)
    return (sums * env).reshape(amps.shape[:-1] + ell.shape)


def oam_spectrum(
    state: QuditState,
    aperture: ApertureSpec | float,
    window: Optional[Tuple[int, int]] = None,
) -> OamSpectrum:
    """OAM amplitudes ``d_l`` of ``state`` for every ``l`` in ``window``.

    ``aperture`` may be an :class:`ApertureSpec` or just the slit width
    ``alpha``.  ``window`` is an inclusive ``(l_min, l_max)`` pair and defaults
    to the central lobe of the envelope.
    """
    if isinstance(aperture, ApertureSpec):
        if aperture.dim != state.dim:
            raise DimensionMismatch(f"state dim {state.dim} vs aperture dim {aperture.dim}")
        alpha = aperture.alpha
    else:
        alpha = float(aperture)
        _check_alpha(alpha, state.dim)
    lo, hi = default_window(alpha) if window is None else (int(window[0]), int(window[1]))
    if hi < lo:
        raise ValueError(f"empty OAM window ({lo}, {hi})")
    ell = np.arange(lo, hi + 1)
    return OamSpectrum(ell=ell, amplitudes=oam_amplitudes(state.amplitudes, alpha, ell), alpha=alpha)


def slit_oam_amplitude(ell, n: int, dim: int, alpha: float):
    """``<l|n>`` for the ``n``-th angular slit state."""
    ell = np.asarray(ell, dtype=float)
    beta = slit_period(dim)
    return (alpha / np.sqrt(2.0 * np.pi)) * sinc_envelope(ell, alpha) * np.exp(-1j * ell * n * beta)


def _check_mode_args(n, dim: int, alpha: float) -> None:
    if dim < 2:
        raise DimensionTooSmall(f"dimension must be >= 2, got {dim}")
    n_arr = np.asarray(n)
    if np.any(n_arr < 0) or np.any(n_arr >= dim):
        raise IndexOutOfRange(f"Fourier index must lie in 0..{dim - 1}")
    _check_alpha(alpha, dim)


def phi_ln(ell, n, dim: int, alpha: float):
    """OAM amplitude ``<l|f_n>`` of the Fourier-basis state ``|f_n>``.

    With ``beta = 2*pi/D`` the Dirichlet kernel
    ``sin(D*beta*(n-l)/2)/sin(beta*(n-l)/2)`` vanishes unless ``l = n (mod D)``.
    At ``n - l = m*D`` both sines vanish and the limit is
    ``D * (-1)**(m*(D-1))``; the sign cancels against the phase factor, so
    ``phi_ln = K*D*sinc(l*alpha/2)`` there.  The kernel is evaluated by this
    congruence branch, never by dividing two sines.  Broadcasts over ``ell``
    and ``n``.
    """
    _check_mode_args(n, dim, alpha)
    ell = np.asarray(ell)
    n = np.asarray(n)
    beta = slit_period(dim)
    k = alpha / np.sqrt(2.0 * np.pi * dim)
    diff = n - ell
    m = np.floor_divide(diff, dim)
    sign = np.where(np.mod(m * (dim - 1), 2) == 0, 1.0, -1.0)
    dirichlet = np.where(np.mod(diff, dim) == 0, dim * sign, 0.0)
    phase = np.exp(1j * beta * diff * (dim - 1) / 2.0)
    out = k * sinc_envelope(ell, alpha) * dirichlet * phase
    return complex(out) if np.ndim(out) == 0 else out


def a_ln(ell, n, dim: int, alpha: float):
    """Normalized mode probability ``|phi_ln / phi_00|**2``."""
    out = np.abs(phi_ln(ell, n, dim, alpha) / phi_ln(0, 0, dim, alpha)) ** 2
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class ModePlan:
    """One postselected OAM value ``l(n)`` per Fourier-basis state ``|f_n>``."""

    dim: int
    assignment: Tuple[int, ...]

    def __post_init__(self):
        assignment = tuple(int(l) for l in self.assignment)
        object.__setattr__(self, "assignment", assignment)
        if len(assignment) != self.dim:
            raise InvalidModePlan(f"{len(assignment)} modes for dimension {self.dim}")
        for n, l in enumerate(assignment):
            if (l - n) % self.dim:
                raise InvalidModePlan(f"mode l={l} is not congruent to n={n} mod {self.dim}")
        if len(set(assignment)) != self.dim:
            raise InvalidModePlan("mode assignment contains duplicates")

    def __iter__(self):
        return iter(self.assignment)

    def __len__(self):
        return self.dim

    def __getitem__(self, n):
        return self.assignment[n]

    def as_array(self) -> np.ndarray:
        return np.array(self.assignment, dtype=int)


def select_modes(dim: int) -> ModePlan:
    """Modes ``l(n)`` closest to ``l = 0``, minimizing diffraction loss.

    ``l(n) = (n + h mod D) - h`` with ``h = (D-1)//2`` for odd ``D`` and
    ``h = D//2`` for even ``D``.
    """
    if dim < 2:
        raise DimensionTooSmall(f"dimension must be >= 2, got {dim}")
    half = (dim - 1) // 2 if dim % 2 else dim // 2
    return ModePlan(dim, tuple((n + half) % dim - half for n in range(dim)))


def trivial_modes(dim: int) -> ModePlan:
    """The naive plan ``l(n) = n``."""
    return ModePlan(dim, tuple(range(dim)))


def envelope_weights(plan: ModePlan, alpha: float) -> np.ndarray:
    """``sinc**2(l(n)*alpha/2)`` per Fourier index; raises on envelope nulls."""
    sinc = sinc_envelope(plan.as_array(), alpha)
    bad = np.abs(sinc) < ENVELOPE_FLOOR
    if np.any(bad):
        modes = plan.as_array()[bad].tolist()
        raise EnvelopeZero(f"modes {modes} sit on a null of sinc(l*alpha/2) for alpha={alpha!r}")
    return sinc ** 2


def compensate(counts, plan: ModePlan, alpha: float) -> np.ndarray:
    """Divide column ``n`` of ``counts`` by ``sinc**2(l(n)*alpha/2)``."""
    counts = np.asarray(counts, dtype=float)
    if counts.shape[-1] != plan.dim:
        raise DimensionMismatch(f"counts have {counts.shape[-1]} columns, plan has {plan.dim}")
    return counts / envelope_weights(plan, alpha)


def measurement_scale(dim: int, alpha: float) -> float:
    """Ratio ``alpha**2 * D / (2*pi)`` between compensated OAM probabilities
    and ideal Fourier-basis probabilities."""
    return alpha * alpha * dim / (2.0 * np.pi)

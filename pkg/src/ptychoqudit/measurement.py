"""Ptychographic projector families and simulated measurement datasets."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .angular_optics import (
    ModePlan,
    envelope_weights,
    measurement_scale,
    oam_amplitudes,
    select_modes,
    slit_period,
)
from .errors import (
    CoverageViolation,
    DimensionMismatch,
    DimensionTooSmall,
    IndexOutOfRange,
    InvalidShots,
    NegativeData,
    NonFiniteData,
    OverlapViolation,
    ShiftOutOfRange,
)
from .qudit_core import QuditState, iqft


def projector_rank(dim: int) -> int:
    return -(-dim // 2)


@dataclass(frozen=True)
class ProjectorFamily:
    """``J`` diagonal rank-``ceil(D/2)`` projectors defined by a shift vector.

    Projector ``j`` keeps the levels ``(k + shifts[j]) mod D`` for
    ``k = 0 .. ceil(D/2)-1`` and blocks the rest.  ``filter_width`` is the
    angular width of the physical filter slits; it is metadata only since the
    projectors are taken to be ideal.

    Build instances with :func:`make_family`, which validates coverage and
    overlap.
    """

    dim: int
    shifts: tuple
    filter_width: Optional[float] = None

    @property
    def rank(self) -> int:
        return projector_rank(self.dim)

    @property
    def J(self) -> int:
        return len(self.shifts)

    @property
    def masks(self) -> np.ndarray:
        """``J x D`` array of 0/1 diagonals."""
        m = np.zeros((self.J, self.dim))
        k = np.arange(self.rank)
        for j, s in enumerate(self.shifts):
            m[j, (k + s) % self.dim] = 1.0
        return m

    def support(self, j: int) -> tuple:
        self._check_index(j)
        return tuple((k + self.shifts[j]) % self.dim for k in range(self.rank))

    def projector(self, j: int) -> np.ndarray:
        """Dense ``D x D`` matrix of projector ``j``."""
        self._check_index(j)
        return np.diag(self.masks[j])

    def overlap_matrix(self) -> np.ndarray:
        """``Tr(P_j P_j') / rank`` for every pair."""
        m = self.masks
        return m @ m.T / self.rank

    def filter_transmission(self, j: int, phi, width: Optional[float] = None) -> np.ndarray:
        """Binary spatial filter implementing projector ``j``.

        Open slits of angular width ``width`` (default: ``filter_width``)
        centred on the supported slit positions.
        """
        width = self.filter_width if width is None else width
        if width is None:
            raise ValueError("no filter width given and none stored on the family")
        phi = np.asarray(phi, dtype=float)
        beta = slit_period(self.dim)
        out = np.zeros(phi.shape)
        for n in self.support(j):
            offset = np.angle(np.exp(1j * (phi - n * beta)))
            out = np.where(np.abs(offset) <= width / 2, 1.0, out)
        return out

    def _check_index(self, j: int) -> None:
        if not 0 <= j < self.J:
            raise IndexOutOfRange(f"projector index {j} outside 0..{self.J - 1}")


def make_family(dim: int, shifts: Sequence[int], filter_width: Optional[float] = None) -> ProjectorFamily:
    """Build and validate a projector family.

    Raises
    ------
    ShiftOutOfRange
        A shift is outside ``0..D-1``.
    CoverageViolation
        Some level is blocked by every projector.
    OverlapViolation
        Some projector has no partner with a partial overlap
        ``0 < Tr(P_j P_j')/rank < 1``.
    """
    if dim < 2:
        raise DimensionTooSmall(f"dimension must be >= 2, got {dim}")
    shifts = tuple(int(s) for s in shifts)
    if len(shifts) < 2:
        raise ValueError(f"a family needs at least 2 projectors, got {len(shifts)}")
    for s in shifts:
        if not 0 <= s < dim:
            raise ShiftOutOfRange(f"shift {s} outside 0..{dim - 1}")
    fam = ProjectorFamily(dim, shifts, filter_width)

    covered = fam.masks.max(axis=0)
    if not np.all(covered):
        missing = np.flatnonzero(covered == 0).tolist()
        raise CoverageViolation(f"levels {missing} are not addressed by any projector")

    ov = fam.overlap_matrix()
    partial = (ov > 0) & (ov < 1)
    lonely = [j for j in range(fam.J) if not partial[j].any()]
    if lonely:
        raise OverlapViolation(f"projectors {lonely} have no partially overlapping partner")
    return fam


def full_family(dim: int, filter_width: Optional[float] = None) -> ProjectorFamily:
    """``J = D`` family with shifts ``0..D-1``."""
    return make_family(dim, range(dim), filter_width)


def five_projector_family(dim: int, filter_width: Optional[float] = None) -> ProjectorFamily:
    """``J = 5`` family with shifts ``j * floor(D/5)``."""
    return make_family(dim, [j * (dim // 5) for j in range(5)], filter_width)


def apply_projector(family: ProjectorFamily, j: int, state) -> np.ndarray:
    """Masked (not renormalized) amplitudes ``P_j |psi>``."""
    family._check_index(j)
    amps = np.asarray(state, dtype=np.complex128)
    if amps.shape[-1] != family.dim:
        raise DimensionMismatch(f"state dim {amps.shape[-1]} vs family dim {family.dim}")
    return family.masks[j] * amps


def fourier_probabilities(state, family: ProjectorFamily) -> np.ndarray:
    """Ideal data ``|<f_n|P_j|psi>|**2`` as a ``J x D`` array."""
    amps = np.asarray(state, dtype=np.complex128)
    if amps.shape[-1] != family.dim:
        raise DimensionMismatch(f"state dim {amps.shape[-1]} vs family dim {family.dim}")
    return np.abs(iqft(family.masks * amps)) ** 2


def oam_probabilities(state, family: ProjectorFamily, plan: ModePlan, alpha: float) -> np.ndarray:
    """Physical data ``|d_{l(n)}(P_j psi)|**2`` as a ``J x D`` array."""
    amps = np.asarray(state, dtype=np.complex128)
    if plan.dim != family.dim or amps.shape[-1] != family.dim:
        raise DimensionMismatch("state, family and mode plan dimensions must agree")
    return np.abs(oam_amplitudes(family.masks * amps, alpha, plan.as_array())) ** 2


@dataclass(frozen=True, eq=False)
class PtychoDataset:
    """Measured (or simulated) ptychographic data and acquisition metadata.

    ``values[j, n]`` is the (possibly compensated) count or probability for
    projector ``j`` and Fourier outcome ``n``.
    """

    dim: int
    shifts: tuple
    alpha: Optional[float]
    mode_plan: Optional[ModePlan]
    values: np.ndarray
    compensated: bool = True
    shots: Optional[int] = None
    seed: Optional[int] = None
    backend: str = "physical"
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        object.__setattr__(self, "shifts", tuple(int(s) for s in self.shifts))
        if vals.shape != (len(self.shifts), self.dim):
            raise DimensionMismatch(
                f"values have shape {vals.shape}, expected {(len(self.shifts), self.dim)}"
            )
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def J(self) -> int:
        return len(self.shifts)

    def validate(self) -> None:
        if not np.all(np.isfinite(self.values)):
            raise NonFiniteData("dataset contains non-finite values")
        if np.any(self.values < 0):
            raise NegativeData("dataset contains negative values")

    def family(self, filter_width: Optional[float] = None) -> ProjectorFamily:
        return make_family(self.dim, self.shifts, filter_width)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "shifts": list(self.shifts),
            "alpha": self.alpha,
            "mode_plan": None if self.mode_plan is None else list(self.mode_plan.assignment),
            "compensated": self.compensated,
            "shots": self.shots,
            "seed": self.seed,
            "backend": self.backend,
            "values": self.values.tolist(),
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PtychoDataset":
        dim = int(data["dim"])
        plan = data.get("mode_plan")
        return cls(
            dim=dim,
            shifts=tuple(data["shifts"]),
            alpha=None if data.get("alpha") is None else float(data["alpha"]),
            mode_plan=None if plan is None else ModePlan(dim, tuple(plan)),
            values=np.asarray(data["values"], dtype=float),
            compensated=bool(data.get("compensated", True)),
            shots=data.get("shots"),
            seed=data.get("seed"),
            backend=data.get("backend", "physical"),
            provenance=data.get("provenance", {}),
        )

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "PtychoDataset":
        return cls.from_dict(json.loads(text))


def _cell_rng(seed: Optional[int], j: int, n: int) -> np.random.Generator:
    # one independent stream per (seed, j, n) so cell order never matters
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(j, n)))


def poisson_counts(means: np.ndarray, seed: Optional[int]) -> np.ndarray:
    means = np.asarray(means, dtype=float)
    out = np.empty_like(means)
    for (j, n), lam in np.ndenumerate(means):
        out[j, n] = _cell_rng(seed, j, n).poisson(lam)
    return out


def simulate_dataset(
    state: QuditState,
    family: ProjectorFamily,
    plan: Optional[ModePlan] = None,
    alpha: float = np.pi / 10,
    shots: Optional[int] = None,
    seed: Optional[int] = None,
    compensate: bool = True,
    backend: str = "physical",
) -> PtychoDataset:
    """Simulate the measurement chain ``psi -> P_j psi -> Fourier outcome n``.

    With ``backend="physical"`` the Fourier outcome ``n`` is the postselected
    OAM mode ``plan[n]`` and the recorded value is ``|d_l(P_j psi)|**2``
    (divided by the envelope when ``compensate``).  With
    ``backend="abstract"`` the value is ``|<f_n|P_j psi>|**2`` directly and
    ``compensate`` is ignored.

    When ``shots`` is given each value is replaced by a Poisson count whose
    mean is ``shots`` times the ideal Fourier-basis probability, attenuated
    by the envelope in the physical backend.  Every cell uses its own random
    stream derived from ``(seed, j, n)``.
    """
    if state.dim != family.dim:
        raise DimensionMismatch(f"state dim {state.dim} vs family dim {family.dim}")
    if shots is not None and int(shots) <= 0:
        raise InvalidShots(f"shots must be a positive integer, got {shots}")
    if seed is None and shots is not None:
        seed = int(np.random.SeedSequence().entropy % (2**63))

    if backend == "abstract":
        values = fourier_probabilities(state.amplitudes, family)
        if shots is not None:
            values = poisson_counts(shots * values, seed)
        compensated = False
    elif backend == "physical":
        plan = select_modes(family.dim) if plan is None else plan
        if plan.dim != family.dim:
            raise DimensionMismatch(f"mode plan dim {plan.dim} vs family dim {family.dim}")
        weights = envelope_weights(plan, alpha) if compensate else None
        values = oam_probabilities(state.amplitudes, family, plan, alpha)
        if shots is not None:
            values = poisson_counts(shots * values / measurement_scale(family.dim, alpha), seed)
        if compensate:
            values = values / weights
        compensated = compensate
    else:
        raise ValueError(f"unknown backend {backend!r}")

    return PtychoDataset(
        dim=family.dim,
        shifts=family.shifts,
        alpha=None if backend == "abstract" else float(alpha),
        mode_plan=plan if backend == "physical" else None,
        values=values,
        compensated=compensated,
        shots=None if shots is None else int(shots),
        seed=seed,
        backend=backend,
    )

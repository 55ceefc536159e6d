"""Ptychographic iterative engine for pure-state estimation.

Each sub-step masks the current estimate with one projector, moves to the
Fourier basis, replaces the magnitudes by the measured ones (keeping the
model phases), returns to the canonical basis and feeds the masked
difference back with step ``eta``.  One iteration visits every projector
once.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import DimensionMismatch, InvalidConfig, NegativeData, NonFiniteData
from .measurement import ProjectorFamily, PtychoDataset
from .qudit_core import (
    QuditState,
    fidelity,
    fix_global_phase,
    iqft,
    normalize,
    qft,
    random_state,
    trace_distance,
)

# below this the model phase of a Fourier component is taken as 0
ZERO_MAGNITUDE = 1e-14


@dataclass(frozen=True)
class PieConfig:
    """Engine settings.

    ``delta_threshold=None`` runs exactly ``max_iterations`` iterations.
    ``initial_state`` overrides the seeded random start.
    """

    eta: float = 1.5
    max_iterations: int = 8
    delta_threshold: Optional[float] = None
    seed: Optional[int] = 0
    track_target: Optional[QuditState] = None
    initial_state: Optional[QuditState] = None

    def __post_init__(self):
        if not 0.0 < self.eta <= 2.0:
            raise InvalidConfig(f"eta must lie in (0, 2], got {self.eta}")
        if int(self.max_iterations) < 1:
            raise InvalidConfig(f"max_iterations must be positive, got {self.max_iterations}")
        if self.delta_threshold is not None and self.delta_threshold < 0:
            raise InvalidConfig("delta_threshold must be >= 0")


@dataclass
class PieResult:
    estimate: QuditState
    iterations_run: int
    delta_trace: List[float]
    fidelity_trace: Optional[List[float]] = None
    converged: bool = False
    data_scale: float = 1.0

    @property
    def final_delta(self) -> float:
        return self.delta_trace[-1]

    @property
    def final_fidelity(self) -> Optional[float]:
        return None if not self.fidelity_trace else self.fidelity_trace[-1]

    def trace_rows(self):
        fids = self.fidelity_trace or [None] * self.iterations_run
        for i, (d, f) in enumerate(zip(self.delta_trace, fids), start=1):
            yield i, d, f

    def write_trace_csv(self, fh, header_comments=()) -> None:
        for line in header_comments:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["iteration", "delta", "fidelity"])
        for i, d, f in self.trace_rows():
            w.writerow([i, repr(float(d)), "" if f is None else repr(float(f))])


def initial_estimate(dim: int, seed=None) -> QuditState:
    """Random starting state (Gaussian real and imaginary parts, normalized)."""
    return random_state(dim, seed)


def pie_update(current, mask, measured_row, eta: float) -> np.ndarray:
    """One projector sub-step of the engine.

    Parameters
    ----------
    current : array_like of complex, shape (D,)
        Current (unnormalized) estimate.
    mask : array_like, shape (D,)
        0/1 diagonal of the projector.
    measured_row : array_like, shape (D,)
        Measured Fourier-basis probabilities for this projector, already on
        the model's probability scale.
    eta : float
        Feedback step.

    Returns
    -------
    ndarray
        Updated estimate.  Entries outside the mask are returned unchanged.
    """
    current = np.asarray(current, dtype=np.complex128)
    mask = np.asarray(mask, dtype=float)
    row = np.asarray(measured_row, dtype=float)
    if not np.all(np.isfinite(row)):
        raise NonFiniteData("measured row contains non-finite values")
    if np.any(row < 0):
        raise NegativeData("measured row contains negative values")

    exit_wave = mask * current
    model = iqft(exit_wave)  # <f_n|P_j Y>
    mag = np.abs(model)
    phase = np.ones_like(model)
    nz = mag >= ZERO_MAGNITUDE
    phase[nz] = model[nz] / mag[nz]
    revised = qft(np.sqrt(row) * phase)
    return current + eta * mask * (revised - exit_wave)


def _validate(dataset: PtychoDataset, family: ProjectorFamily) -> np.ndarray:
    if dataset.dim != family.dim or dataset.J != family.J:
        raise DimensionMismatch(
            f"dataset is {dataset.J}x{dataset.dim}, family is {family.J}x{family.dim}"
        )
    if tuple(dataset.shifts) != tuple(family.shifts):
        raise DimensionMismatch("dataset shifts do not match the projector family")
    values = np.asarray(dataset.values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise NonFiniteData("dataset contains non-finite values")
    if np.any(values < 0):
        raise NegativeData("dataset contains negative values")
    if values.sum() <= 0:
        raise NonFiniteData("dataset has no signal (all values are zero)")
    return values


def reconstruct(dataset: PtychoDataset, family: ProjectorFamily, config: PieConfig = PieConfig()) -> PieResult:
    """Estimate the pure state behind ``dataset``.

    The data only need to be proportional to Fourier-basis probabilities: a
    single global factor is fitted once, so that the total data mass equals
    the total model mass ``sum_j ||P_j Y0||**2`` of the initial estimate, and
    kept fixed afterwards.
    """
    values = _validate(dataset, family)
    masks = family.masks

    if config.initial_state is not None:
        start = config.initial_state
        if start.dim != family.dim:
            raise DimensionMismatch("initial state dimension does not match the family")
    else:
        start = initial_estimate(family.dim, config.seed)
    current = start.amplitudes.copy()

    model_mass = float(np.sum(masks * np.abs(current) ** 2))
    scale = model_mass / float(values.sum())
    data = values * scale

    target = config.track_target
    deltas: List[float] = []
    fids: Optional[List[float]] = [] if target is not None else None
    converged = False
    previous = normalize(current)
    for it in range(int(config.max_iterations)):
        for j in range(family.J):
            current = pie_update(current, masks[j], data[j], config.eta)
        if not np.all(np.isfinite(current)):
            raise NonFiniteData(f"estimate diverged at iteration {it + 1}")
        updated = normalize(current)
        deltas.append(trace_distance(previous, updated))
        if fids is not None:
            fids.append(fidelity(updated, target))
        previous = updated
        if config.delta_threshold is not None and deltas[-1] < config.delta_threshold:
            converged = True
            break

    return PieResult(
        estimate=fix_global_phase(previous),
        iterations_run=len(deltas),
        delta_trace=deltas,
        fidelity_trace=fids,
        converged=converged,
        data_scale=scale,
    )

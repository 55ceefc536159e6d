"""Example states and end-to-end runs for D = 5 and D = 12 angular qudits.

States ``a`` and ``b`` have random phases (and, for ``a`` with D = 5, random
magnitudes); they are regenerated from the fixed seeds in
:data:`STATE_SEEDS`.  State ``c`` has fixed phases.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np

from .angular_optics import (
    a_ln,
    oam_spectrum,
    select_modes,
    sinc_envelope,
)
from .errors import InvalidConfig
from .measurement import (
    ProjectorFamily,
    make_family,
    oam_probabilities,
    simulate_dataset,
)
from .pie import PieConfig, PieResult, reconstruct
from .qudit_core import QuditState, normalize

from ._version import __version__

DEFAULT_ALPHA = np.pi / 10
FIG5_ALPHA = np.pi / 20
DEFAULT_ETA = 1.5

FIXED_PHASES = {
    5: np.pi * np.array([0, 0.8, -0.8, 0.8, 0]),
    12: (np.pi / 5) * np.array([0, 2, 1, 2, 4, -2, -2, 4, 2, 1, 2, 0]),
}
D12_A_MAGNITUDE_STEP = 0.039223

#: Seeds for the randomly generated example states, keyed by (dim, name).
STATE_SEEDS = {(5, "a"): 501, (5, "b"): 502, (12, "a"): 1201, (12, "b"): 1202}
#: Seed for the engine's random initial estimate in every reproduction run.
PIE_SEED = 7


def _random_phases(rng: np.random.Generator, dim: int) -> np.ndarray:
    phases = rng.uniform(-np.pi, np.pi, dim)
    return phases - phases[0]


def paper_state(dim: int, name: str, seed: Optional[int] = None) -> QuditState:
    """One of the example states ``a``, ``b`` or ``c`` for ``dim`` in {5, 12}.

    ``seed`` overrides the default seed of the random states.
    """
    if dim not in FIXED_PHASES:
        raise InvalidConfig(f"example states exist for D=5 and D=12 only, not D={dim}")
    name = name.lower()
    if name == "c":
        return normalize(np.exp(1j * FIXED_PHASES[dim]) / np.sqrt(dim))
    if name not in ("a", "b"):
        raise InvalidConfig(f"unknown example state {name!r}; expected a, b or c")
    rng = np.random.default_rng(STATE_SEEDS[(dim, name)] if seed is None else seed)
    if name == "b":
        return normalize(np.exp(1j * _random_phases(rng, dim)) / np.sqrt(dim))
    if dim == 12:
        mags = D12_A_MAGNITUDE_STEP * (np.arange(dim) + 1)
        return normalize(mags * np.exp(1j * _random_phases(rng, dim)))
    return normalize(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))


@dataclass
class ScenarioRun:
    name: str
    target: QuditState
    family: ProjectorFamily
    result: PieResult

    @property
    def final_fidelity(self) -> float:
        return self.result.fidelity_trace[-1]

    def summary(self) -> dict:
        return {
            "state": self.name,
            "dim": self.target.dim,
            "shifts": list(self.family.shifts),
            "iterations": self.result.iterations_run,
            "final_fidelity": self.final_fidelity,
            "final_delta": self.result.final_delta,
            "target": self.target.to_dict(),
            "estimate": self.result.estimate.to_dict(),
        }


def run_scenario(
    dim: int,
    name: str,
    shifts: Sequence[int],
    iterations: int,
    eta: float = DEFAULT_ETA,
    alpha: float = DEFAULT_ALPHA,
    shots: Optional[int] = None,
    seed: int = PIE_SEED,
    data_seed: Optional[int] = None,
    target: Optional[QuditState] = None,
) -> ScenarioRun:
    """Simulate compensated OAM data for an example state and reconstruct it."""
    target = paper_state(dim, name) if target is None else target
    family = make_family(dim, shifts)
    data = simulate_dataset(target, family, select_modes(dim), alpha, shots=shots, seed=data_seed)
    config = PieConfig(eta=eta, max_iterations=iterations, seed=seed, track_target=target)
    return ScenarioRun(name, target, family, reconstruct(data, family, config))


FIGURES = ("fig3", "fig4", "fig5", "fig6", "fig7-top", "fig7-bottom")

_RECONSTRUCTIONS = {
    "fig6": dict(dim=5, shifts=tuple(range(5)), iterations=8),
    "fig7-top": dict(dim=12, shifts=tuple(range(12)), iterations=8),
    "fig7-bottom": dict(dim=12, shifts=(0, 2, 4, 6, 8), iterations=16),
}


def _comment_lines(meta: dict):
    return [f"ptychoqudit {__version__}", "config " + json.dumps(meta, sort_keys=True)]


def _num(x) -> str:
    # shortest round-trip text for numpy and Python scalars alike
    return repr(float(x))


def _write_csv(path, header, rows, meta):
    with open(path, "w", newline="") as fh:
        for line in _comment_lines(meta):
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _spectra(dim: int, output_dir: str, meta: dict) -> dict:
    summary = {}
    for name in "abc":
        state = paper_state(dim, name)
        c = np.abs(state.amplitudes) ** 2
        _write_csv(
            os.path.join(output_dir, f"slit_D{dim}_{name}.csv"),
            ["n", "re", "im", "prob", "normalized_prob"],
            [[n, _num(a.real), _num(a.imag), _num(p), _num(p / c.max())]
             for n, (a, p) in enumerate(zip(state.amplitudes, c))],
            meta,
        )
        spec = oam_spectrum(state, DEFAULT_ALPHA)
        with open(os.path.join(output_dir, f"oam_D{dim}_{name}.csv"), "w", newline="") as fh:
            spec.to_csv(fh, _comment_lines(meta))
        summary[name] = {"state": state.to_dict(), "ell_window": [spec.ell_min, spec.ell_max]}
    return summary


def _fig4_filters(output_dir: str, meta: dict) -> dict:
    dim, width = 12, np.pi / 12
    phi = np.linspace(-np.pi, np.pi, 721, endpoint=False)
    out = {}
    for label, shifts in (("J12", range(12)), ("J5", (0, 2, 4, 6, 8))):
        fam = make_family(dim, shifts, filter_width=width)
        rows = [[_num(p)] + [_num(fam.filter_transmission(j, p)) for j in range(fam.J)] for p in phi]
        _write_csv(
            os.path.join(output_dir, f"filters_D12_{label}.csv"),
            ["phi"] + [f"T_{j}" for j in range(fam.J)],
            rows,
            meta,
        )
        out[label] = {"shifts": list(fam.shifts), "supports": [list(fam.support(j)) for j in range(fam.J)]}
    return out


def _fig5(output_dir: str, meta: dict) -> dict:
    dim, alpha = 5, FIG5_ALPHA
    ell = np.arange(-3 * int(np.ceil(2 * np.pi / alpha)), 3 * int(np.ceil(2 * np.pi / alpha)) + 1)
    grid = a_ln(ell[:, None], np.arange(dim)[None, :], dim, alpha)
    env = sinc_envelope(ell, alpha) ** 2
    _write_csv(
        os.path.join(output_dir, "A_ln_D5.csv"),
        ["ell"] + [f"A_l{n}" for n in range(dim)] + ["envelope"],
        [[int(l)] + [_num(v) for v in row] + [_num(e)] for l, row, e in zip(ell, grid, env)],
        meta,
    )
    return {"dim": dim, "alpha": alpha, "mode_plan": list(select_modes(dim).assignment)}


def _pie_figure(fig: str, output_dir: str, meta: dict) -> dict:
    params = _RECONSTRUCTIONS[fig]
    dim = params["dim"]
    runs = {}
    for name in "abc":
        run = run_scenario(dim, name, params["shifts"], params["iterations"])
        with open(os.path.join(output_dir, f"{fig}_trace_{name}.csv"), "w", newline="") as fh:
            run.result.write_trace_csv(fh, _comment_lines(meta))
        plan = select_modes(dim)
        raw = oam_probabilities(run.target.amplitudes, run.family, plan, DEFAULT_ALPHA)
        _write_csv(
            os.path.join(output_dir, f"{fig}_data_{name}.csv"),
            ["j", "n", "ell", "raw_prob", "compensated_prob"],
            [[j, n, plan[n], _num(raw[j, n]), _num(raw[j, n] / sinc_envelope(plan[n], DEFAULT_ALPHA) ** 2)]
             for j in range(run.family.J) for n in range(dim)],
            meta,
        )
        runs[name] = run.summary()
    return runs


def reproduce(figure: str, output_dir: str) -> dict:
    """Regenerate the data behind one of :data:`FIGURES` into ``output_dir``.

    Returns the summary that is also written to ``summary.json``.
    """
    if figure not in FIGURES:
        raise InvalidConfig(f"unknown figure {figure!r}; choose from {', '.join(FIGURES)}")
    os.makedirs(output_dir, exist_ok=True)
    meta = {
        "figure": figure,
        "alpha": FIG5_ALPHA if figure == "fig5" else DEFAULT_ALPHA,
        "eta": DEFAULT_ETA,
        "pie_seed": PIE_SEED,
        "state_seeds": {f"{d}{n}": s for (d, n), s in STATE_SEEDS.items()},
    }
    meta.update(_RECONSTRUCTIONS.get(figure, {}))
    if "shifts" in meta:
        meta["shifts"] = list(meta["shifts"])

    if figure == "fig3":
        body = _spectra(5, output_dir, meta)
    elif figure == "fig4":
        body = {"spectra": _spectra(12, output_dir, meta), "filters": _fig4_filters(output_dir, meta)}
    elif figure == "fig5":
        body = _fig5(output_dir, meta)
    else:
        body = _pie_figure(figure, output_dir, meta)

    summary = {"version": __version__, "config": meta, "results": body}
    with open(os.path.join(output_dir, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2)
    return summary

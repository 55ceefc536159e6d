"""Command-line front end: ``ptychoqudit {synth,spectrum,measure,reconstruct,reproduce}``.

Settings come from flags, an optional flat ``key = value`` config file
(``--config``), and built-in defaults, in that order of precedence.

Exit codes: 0 success, 2 validation or I/O error, 3 numerical failure
(no convergence when a ``threshold`` was requested).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ._version import __version__
from .angular_optics import ModePlan, select_modes
from .errors import InvalidConfig, PtychoQuditError
from .measurement import PtychoDataset, make_family, simulate_dataset
from .pie import PieConfig, reconstruct
from .qudit_core import QuditState, normalize, random_state
from .scenarios import FIGURES, DEFAULT_ALPHA, DEFAULT_ETA, paper_state, reproduce

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


@dataclass
class ScenarioConfig:
    dim: Optional[int] = None
    alpha: float = DEFAULT_ALPHA
    paper_state: Optional[str] = None
    amplitudes: Optional[Tuple[complex, ...]] = None
    random_seed: Optional[int] = None
    shifts: Optional[Tuple[int, ...]] = None
    eta: float = DEFAULT_ETA
    iterations: int = 8
    threshold: Optional[float] = None
    shots: Optional[int] = None
    seed: int = 0
    backend: str = "physical"
    compensate: bool = True
    window: Optional[Tuple[int, int]] = None
    output_dir: str = "."

    def resolved(self) -> dict:
        out = {}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if f.name == "amplitudes" and v is not None:
                v = [str(a) for a in v]
            elif isinstance(v, tuple):
                v = list(v)
            out[f.name] = v
        return out


def _parse_int_list(text: str) -> Tuple[int, ...]:
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..")
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(t) for t in text.replace(",", " ").split())


def _parse_complex_list(text: str) -> Tuple[complex, ...]:
    return tuple(complex(t.replace(" ", "").replace("i", "j")) for t in text.split(","))


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_alpha(text: str) -> float:
    # accepts "0.314", "pi/10", "pi / 20"
    t = text.replace(" ", "").lower()
    if t.startswith("pi"):
        rest = t[2:]
        if not rest:
            return math.pi
        if rest.startswith("/"):
            return math.pi / float(rest[1:])
        raise ValueError(f"cannot parse angle {text!r}")
    return float(t)


def _parse_window(text: str) -> Tuple[int, int]:
    vals = _parse_int_list(text.replace("..", " ") if ".." in text else text)
    if len(vals) != 2:
        raise ValueError("window needs exactly two integers")
    return vals[0], vals[1]


_PARSERS = {
    "dim": int,
    "alpha": _parse_alpha,
    "paper_state": lambda s: s.strip().lower(),
    "amplitudes": _parse_complex_list,
    "random_seed": int,
    "shifts": _parse_int_list,
    "eta": float,
    "iterations": int,
    "threshold": float,
    "shots": lambda s: int(float(s)),
    "seed": int,
    "backend": lambda s: s.strip().lower(),
    "compensate": _parse_bool,
    "window": _parse_window,
    "output_dir": lambda s: s.strip(),
}


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Parse a flat ``key = value`` document; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidConfig(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _PARSERS:
            raise InvalidConfig(f"{source}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise InvalidConfig(f"{source}:{lineno}: bad value for {key!r}: {exc}") from None
    return values


def load_config(path: Optional[str], overrides: dict) -> ScenarioConfig:
    merged = {}
    if path:
        with open(path) as fh:
            merged.update(parse_config_text(fh.read(), path))
    merged.update({k: v for k, v in overrides.items() if v is not None})
    return ScenarioConfig(**merged)


def _provenance(command: str, cfg: ScenarioConfig, **extra) -> dict:
    prov = {"tool": "ptychoqudit", "version": __version__, "command": command, "config": cfg.resolved()}
    prov.update(extra)
    return prov


def _csv_header(prov: dict):
    return [f"ptychoqudit {prov['version']} {prov['command']}", "config " + json.dumps(prov, sort_keys=True)]


def _out_path(cfg: ScenarioConfig, given: Optional[str], default_name: str) -> str:
    path = given or os.path.join(cfg.output_dir, default_name)
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    return path


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _read_state(path: str) -> QuditState:
    with open(path) as fh:
        return QuditState.from_dict(json.load(fh))


def _common_overrides(args, names) -> dict:
    return {n: getattr(args, n, None) for n in names}


# -- subcommands -------------------------------------------------------------

def cmd_synth(args) -> int:
    cfg = load_config(args.config, _common_overrides(
        args, ["dim", "paper_state", "amplitudes", "random_seed", "output_dir"]))
    if cfg.amplitudes is not None:
        state = normalize(cfg.amplitudes)
        if cfg.dim is not None and cfg.dim != state.dim:
            raise InvalidConfig(f"--dim {cfg.dim} but {state.dim} amplitudes given")
        cfg.dim = state.dim
    elif cfg.dim is None:
        raise InvalidConfig("synth needs --dim (or --amplitudes)")
    elif cfg.paper_state is not None:
        state = paper_state(cfg.dim, cfg.paper_state)
    elif cfg.random_seed is not None:
        state = random_state(cfg.dim, cfg.random_seed)
    else:
        raise InvalidConfig("choose one of --paper-state, --amplitudes or --random-seed")
    payload = state.to_dict()
    payload["provenance"] = _provenance("synth", cfg)
    path = _out_path(cfg, args.output, "state.json")
    _write_json(path, payload)
    print(path)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    from .angular_optics import oam_spectrum

    cfg = load_config(args.config, _common_overrides(args, ["alpha", "window", "output_dir"]))
    state = _read_state(args.state)
    cfg.dim = state.dim
    spec = oam_spectrum(state, cfg.alpha, cfg.window)
    path = _out_path(cfg, args.output, "spectrum.csv")
    with open(path, "w", newline="") as fh:
        spec.to_csv(fh, _csv_header(_provenance("spectrum", cfg, state_file=args.state)))
    print(path)
    return EXIT_OK


def cmd_measure(args) -> int:
    cfg = load_config(args.config, _common_overrides(
        args, ["alpha", "shifts", "shots", "seed", "backend", "compensate", "output_dir"]))
    state = _read_state(args.state)
    cfg.dim = state.dim
    shifts = cfg.shifts if cfg.shifts is not None else tuple(range(state.dim))
    cfg.shifts = tuple(shifts)
    family = make_family(state.dim, shifts)
    data = simulate_dataset(
        state, family, select_modes(state.dim), cfg.alpha,
        shots=cfg.shots, seed=cfg.seed if cfg.shots is not None else None,
        compensate=cfg.compensate, backend=cfg.backend,
    )
    data = dataclasses.replace(data, provenance=_provenance("measure", cfg, state_file=args.state))
    path = _out_path(cfg, args.output, "dataset.json")
    _write_json(path, data.to_dict())
    print(path)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    cfg = load_config(args.config, _common_overrides(
        args, ["eta", "iterations", "threshold", "seed", "output_dir"]))
    with open(args.dataset) as fh:
        data = PtychoDataset.from_dict(json.load(fh))
    cfg.dim = data.dim
    cfg.shifts = data.shifts
    target = _read_state(args.target) if args.target else None
    family = make_family(data.dim, data.shifts)
    config = PieConfig(eta=cfg.eta, max_iterations=cfg.iterations, delta_threshold=cfg.threshold,
                       seed=cfg.seed, track_target=target)
    result = reconstruct(data, family, config)

    prov = _provenance("reconstruct", cfg, dataset_file=args.dataset, target_file=args.target)
    payload = result.estimate.to_dict()
    payload.update({
        "iterations_run": result.iterations_run,
        "converged": result.converged,
        "final_delta": result.final_delta,
        "final_fidelity": result.final_fidelity,
        "provenance": prov,
    })
    path = _out_path(cfg, args.output, "estimate.json")
    _write_json(path, payload)
    trace = _out_path(cfg, args.trace, "trace.csv")
    with open(trace, "w", newline="") as fh:
        result.write_trace_csv(fh, _csv_header(prov))
    print(path)
    print(trace)
    if cfg.threshold is not None and not result.converged:
        print(f"error: no convergence below delta={cfg.threshold} in {cfg.iterations} iterations",
              file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_reproduce(args) -> int:
    out = args.output_dir or os.path.join(".", args.figure)
    summary = reproduce(args.figure, out)
    results = summary["results"]
    if args.figure in ("fig6", "fig7-top", "fig7-bottom"):
        for name, run in results.items():
            print(f"{args.figure} state {name}: F = {run['final_fidelity']:.12f}  "
                  f"Delta = {run['final_delta']:.3e}  ({run['iterations']} iterations)")
    print(os.path.join(out, "summary.json"))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ptychoqudit", description="Simulate and reconstruct photonic angular qudit states by ptychography.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, output_default_help):
        sp.add_argument("--config", help="flat key = value config file")
        sp.add_argument("--output-dir", dest="output_dir")
        sp.add_argument("-o", "--output", help=output_default_help)

    s = sub.add_parser("synth", help="write a qudit state as JSON")
    common(s, "state file (default: OUTPUT_DIR/state.json)")
    s.add_argument("--dim", type=int)
    s.add_argument("--paper-state", dest="paper_state", choices=["a", "b", "c"])
    s.add_argument("--amplitudes", type=_parse_complex_list, help="comma-separated, e.g. 1,0,1j")
    s.add_argument("--random-seed", dest="random_seed", type=int)
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("spectrum", help="export the OAM spectrum of a state as CSV")
    common(s, "CSV file (default: OUTPUT_DIR/spectrum.csv)")
    s.add_argument("state")
    s.add_argument("--alpha", type=_parse_alpha)
    s.add_argument("--window", nargs=2, type=int, metavar=("LMIN", "LMAX"))
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("measure", help="simulate a ptychographic dataset")
    common(s, "dataset file (default: OUTPUT_DIR/dataset.json)")
    s.add_argument("state")
    s.add_argument("--alpha", type=_parse_alpha)
    s.add_argument("--shifts", type=_parse_int_list, help="e.g. 0,2,4,6,8 or 0..11")
    s.add_argument("--shots", type=lambda t: int(float(t)))
    s.add_argument("--seed", type=int)
    s.add_argument("--backend", choices=["physical", "abstract"])
    s.add_argument("--no-compensate", dest="compensate", action="store_const", const=False)
    s.set_defaults(func=cmd_measure)

    s = sub.add_parser("reconstruct", help="run the iterative engine on a dataset")
    common(s, "estimate file (default: OUTPUT_DIR/estimate.json)")
    s.add_argument("dataset")
    s.add_argument("--eta", type=float)
    s.add_argument("--iterations", type=int)
    s.add_argument("--threshold", type=float)
    s.add_argument("--seed", type=int)
    s.add_argument("--target", help="state file used for the fidelity trace")
    s.add_argument("--trace", help="trace CSV (default: OUTPUT_DIR/trace.csv)")
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("reproduce", help="regenerate the data of one figure")
    s.add_argument("figure", choices=FIGURES)
    s.add_argument("--output-dir", dest="output_dir")
    s.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PtychoQuditError, OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())

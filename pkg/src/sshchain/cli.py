"""Command-line interface.

One binary, five subcommands: spectrum, localization, evolve, sweep,
validate-rwa.  Options can come from a JSON config file (--config) with
explicit flags taking precedence and package defaults filling the rest;
every run writes the fully resolved configuration to a manifest whose
hash is stamped into the data files.

Exit codes: 0 success, 2 invalid configuration, 3 numeric failure,
4 resource limit, 5 validation gate failure (validate-rwa only).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .dynamics import (CONVERGENCE_TOL, FixedTheta, NnnRamp, ThetaRamp, edge_state, evolve)
from .errors import NumericFailure, ResourceLimit
from .lattice import LatticeSpec, NnnPlacement
from .rwa import FockModelSpec, first_j0_zero, run_validation
from .spectral import default_theta_grid, localization_sweep, spectrum_sweep
from .sweep import SweepPlan, run_sweep
from . import reporting

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERIC = 3
EXIT_RESOURCE = 4
EXIT_GATE = 5

_DEFAULTS = {
    "spectrum": {"cells": 10, "nnn": "none", "T": 0.0, "theta_points": 512, "theta": None},
    "localization": {"cells": 10, "nnn": "none", "T": 0.0, "theta_points": 512, "theta": None},
    "evolve": {"cells": 10, "protocol": "theta-ramp", "omega": 1e-3, "theta": None,
               "duration": None, "nnn": "none", "T": 0.0, "init": "L", "target": "R",
               "samples": 1000, "dt": None, "step_ceiling": 10 ** 8,
               "check_convergence": True},
    "sweep": {"cells": 10, "nnn": "odd", "init": "L", "target": "R",
              "omega_grid": None, "omega_min": 1e-4, "omega_max": 5e-2, "omega_points": 16,
              "t_grid": None, "t_min": 0.0, "t_max": 0.8, "t_points": 17,
              "dt": None, "check_convergence": True, "step_ceiling": 10 ** 8},
    "validate-rwa": {"omega_b": 10.0, "nu": 100.0, "kappa": None, "G": None,
                     "G1": 1.0, "G2": 1.0, "T": 0.0, "n_max": 2, "phi": 0.0,
                     "duration": 10.0, "dt": None, "samples": 201, "gate": 0.05,
                     "cutoff_rerun": True},
}


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sshchain",
        description="Edge-state transfer simulations for a modulated SSH chain")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out-dir", default=".", help="directory for output files")
        p.add_argument("--config", default=None, help="JSON config file (flags override it)")

    def lattice_opts(p):
        p.add_argument("--cells", type=int, default=None, help="number of unit cells N")
        p.add_argument("--nnn", choices=("none", "odd", "even"), default=None,
                       help="sublattice carrying the NNN hopping")
        p.add_argument("--T", type=float, default=None, dest="T",
                       help="NNN hopping strength (ramp target for nnn-ramp)")

    p = sub.add_parser("spectrum", help="theta-resolved eigenvalue spectrum")
    common(p)
    lattice_opts(p)
    p.add_argument("--theta-points", type=int, default=None, help="grid size over [0, 2*pi]")
    p.add_argument("--theta", type=float, default=None, help="evaluate a single angle instead")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("localization", help="gap-state site populations over theta")
    common(p)
    lattice_opts(p)
    p.add_argument("--theta-points", type=int, default=None, help="grid size over [0, 2*pi]")
    p.add_argument("--theta", type=float, default=None, help="evaluate a single angle instead")
    p.set_defaults(func=cmd_localization)

    p = sub.add_parser("evolve", help="time evolution under a drive protocol")
    common(p)
    lattice_opts(p)
    p.add_argument("--protocol", choices=("theta-ramp", "fixed-theta", "nnn-ramp"), default=None)
    p.add_argument("--omega", type=float, default=None, help="ramp rate")
    p.add_argument("--theta", type=float, default=None,
                   help="fixed angle (fixed-theta and nnn-ramp protocols)")
    p.add_argument("--duration", type=float, default=None, help="duration for fixed-theta")
    p.add_argument("--init", choices=("L", "R", "Lp", "Rp"), default=None)
    p.add_argument("--target", choices=("L", "R", "Lp", "Rp"), default=None)
    p.add_argument("--samples", type=int, default=None, help="number of recorded samples")
    p.add_argument("--dt", type=float, default=None, help="integrator step override")
    p.add_argument("--step-ceiling", type=int, default=None)
    p.add_argument("--check-convergence", action=argparse.BooleanOptionalAction, default=None)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("sweep", help="(omega, T) fidelity map")
    common(p)
    lattice_opts(p)
    p.add_argument("--init", choices=("L", "R", "Lp", "Rp"), default=None)
    p.add_argument("--target", choices=("L", "R", "Lp", "Rp"), default=None)
    p.add_argument("--omega-grid", type=_float_list, default=None,
                   help="explicit comma-separated omega values")
    p.add_argument("--omega-min", type=float, default=None)
    p.add_argument("--omega-max", type=float, default=None)
    p.add_argument("--omega-points", type=int, default=None, help="log-spaced point count")
    p.add_argument("--t-grid", type=_float_list, default=None,
                   help="explicit comma-separated T values")
    p.add_argument("--t-min", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--t-points", type=int, default=None, help="linearly spaced point count")
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--check-convergence", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--step-ceiling", type=int, default=None)
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (also SSHCHAIN_WORKERS)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate-rwa", help="full three-mode model vs effective chain")
    common(p)
    p.add_argument("--omega-b", type=float, default=None, dest="omega_b")
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--kappa", type=float, default=None,
                   help="Bessel argument 2*lambda (default: first J0 zero)")
    p.add_argument("--G", type=float, default=None, help="set both couplings at once")
    p.add_argument("--G1", type=float, default=None)
    p.add_argument("--G2", type=float, default=None)
    p.add_argument("--T", type=float, default=None, dest="T", help="direct cavity-cavity coupling")
    p.add_argument("--n-max", type=int, default=None, help="Fock cutoff per mode")
    p.add_argument("--phi", type=float, default=None, help="modulation phase")
    p.add_argument("--duration", type=float, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--gate", type=float, default=None, help="rms deviation gate")
    p.add_argument("--cutoff-rerun", action=argparse.BooleanOptionalAction, default=None)
    p.set_defaults(func=cmd_validate_rwa)

    return parser


def resolve_config(args: argparse.Namespace, command: str) -> dict:
    """Merge defaults, config file, and explicit flags (flag > file > default)."""
    config = dict(_DEFAULTS[command])
    if args.config is not None:
        path = Path(args.config)
        if not path.is_file():
            raise ValueError(f"config file not found: {path}")
        try:
            loaded = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ValueError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ValueError("config file must hold a JSON object")
        unknown = sorted(set(loaded) - set(config))
        if unknown:
            raise ValueError(f"unknown config keys for {command}: {', '.join(unknown)}")
        config.update(loaded)
    for key in config:
        value = getattr(args, key, None)
        if value is not None:
            config[key] = value
    return config


def _placement(config: dict) -> NnnPlacement:
    if config["nnn"] == "none":
        if config["T"] not in (0, 0.0):
            raise ValueError("a nonzero T needs --nnn odd or --nnn even")
        return NnnPlacement.none()
    return NnnPlacement(config["nnn"], config["T"])


def _theta_grid(config: dict) -> np.ndarray:
    if config["theta"] is not None:
        return np.array([float(config["theta"])])
    return default_theta_grid(config["theta_points"])


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_spectrum(args) -> int:
    config = resolve_config(args, "spectrum")
    spec = LatticeSpec(config["cells"])
    grid = _theta_grid(config)
    results = spectrum_sweep(spec, _placement(config), grid)
    out = _out_dir(args)
    digest = reporting.write_manifest(out / "spectrum_manifest.json", "spectrum", config)
    header = ["theta"] + [f"E{k}" for k in range(1, spec.n_sites + 1)]
    rows = ([r.theta, *r.eigenvalues] for r in results)
    reporting.write_csv(out / "spectrum.csv", digest, header, rows)
    return EXIT_OK


def cmd_localization(args) -> int:
    config = resolve_config(args, "localization")
    spec = LatticeSpec(config["cells"])
    grid = _theta_grid(config)
    states = localization_sweep(spec, _placement(config), grid)
    out = _out_dir(args)
    digest = reporting.write_manifest(out / "localization_manifest.json", "localization", config)
    rows = ((theta, site + 1, state.populations[site])
            for theta, state in zip(grid, states)
            for site in range(spec.n_sites))
    reporting.write_csv(out / "localization.csv", digest, ["theta", "site", "population"], rows)
    return EXIT_OK


def _build_protocol(config: dict):
    nnn = _placement(config)
    name = config["protocol"]
    if name == "theta-ramp":
        if config["omega"] is None:
            raise ValueError("theta-ramp needs --omega")
        return ThetaRamp(config["omega"], nnn)
    if name == "fixed-theta":
        if config["theta"] is None or config["duration"] is None:
            raise ValueError("fixed-theta needs --theta and --duration")
        return FixedTheta(config["theta"], config["duration"], nnn)
    if config["theta"] is None or config["omega"] is None:
        raise ValueError("nnn-ramp needs --theta and --omega")
    if nnn.variant == "none":
        raise ValueError("nnn-ramp needs --nnn odd or --nnn even with --T as the ramp target")
    return NnnRamp(config["theta"], config["omega"], nnn)


def cmd_evolve(args) -> int:
    config = resolve_config(args, "evolve")
    spec = LatticeSpec(config["cells"])
    protocol = _build_protocol(config)
    initial = edge_state(spec, config["init"])
    target = edge_state(spec, config["target"])
    trajectory = evolve(spec, protocol, initial, target, sampling=config["samples"],
                        dt=config["dt"], step_ceiling=config["step_ceiling"])
    summary = {
        "final_fidelity": trajectory.final_fidelity,
        "steps": trajectory.steps,
        "dt": trajectory.dt,
        "converged": None,
        "convergence_delta": None,
        "refined_final_fidelity": None,
    }
    if config["check_convergence"]:
        fine = evolve(spec, protocol, initial, target, sampling=2, dt=trajectory.dt / 2.0,
                      step_ceiling=config["step_ceiling"])
        delta = abs(fine.final_fidelity - trajectory.final_fidelity)
        summary.update(converged=delta <= CONVERGENCE_TOL, convergence_delta=delta,
                       refined_final_fidelity=fine.final_fidelity)
    out = _out_dir(args)
    digest = reporting.write_manifest(out / "evolve_manifest.json", "evolve", config)
    header = ["t", "norm", "fidelity"] + [f"p{k}" for k in range(1, spec.n_sites + 1)]
    rows = ((trajectory.times[i], trajectory.norms[i], trajectory.fidelity_vs_target[i],
             *trajectory.populations[i]) for i in range(trajectory.times.size))
    reporting.write_csv(out / "trajectory.csv", digest, header, rows)
    summary["manifest_hash"] = digest
    reporting.write_json(out / "evolve_fidelity.json", summary)
    return EXIT_OK


def _sweep_grids(config: dict) -> tuple[tuple[float, ...], tuple[float, ...]]:
    if config["omega_grid"] is not None:
        omega = tuple(config["omega_grid"])
    else:
        omega = tuple(np.geomspace(config["omega_min"], config["omega_max"],
                                   config["omega_points"]))
    if config["t_grid"] is not None:
        t = tuple(config["t_grid"])
    else:
        t = tuple(np.linspace(config["t_min"], config["t_max"], config["t_points"]))
    return omega, t


def cmd_sweep(args) -> int:
    config = resolve_config(args, "sweep")
    omega_grid, t_grid = _sweep_grids(config)
    config["omega_grid"] = list(omega_grid)
    config["t_grid"] = list(t_grid)
    plan = SweepPlan(
        lattice=LatticeSpec(config["cells"]), placement_variant=config["nnn"],
        omega_grid=omega_grid, t_grid=t_grid, initial=config["init"],
        target=config["target"], dt=config["dt"],
        check_convergence=config["check_convergence"], step_ceiling=config["step_ceiling"])
    result = run_sweep(plan, workers=args.workers)
    out = _out_dir(args)
    digest = reporting.write_manifest(out / "sweep_manifest.json", "sweep", config)
    rows = ((r.omega, r.t_strength, r.fidelity, r.steps, r.converged) for r in result.rows)
    reporting.write_csv(out / "sweep.csv", digest,
                        ["omega", "T", "fidelity", "steps", "converged"], rows)
    failures = [r for r in result.rows if r.error]
    for row in failures:
        print(f"cell (omega={row.omega:g}, T={row.t_strength:g}) failed: {row.error}",
              file=sys.stderr)
    return EXIT_OK


def cmd_validate_rwa(args) -> int:
    config = resolve_config(args, "validate-rwa")
    if config["G"] is not None:
        config["G1"] = config["G2"] = config["G"]
    if config["kappa"] is None:
        config["kappa"] = first_j0_zero()
    if config["dt"] is None:
        config["dt"] = 0.02 * 2.0 * math.pi / config["nu"]
    spec = FockModelSpec.from_kappa(
        config["kappa"], omega_b=config["omega_b"], nu=config["nu"], G1=config["G1"],
        G2=config["G2"], T=config["T"], n_max=config["n_max"], phi=config["phi"])
    validation = run_validation(spec, config["duration"], config["dt"],
                                samples=config["samples"],
                                cutoff_rerun=config["cutoff_rerun"])
    out = _out_dir(args)
    digest = reporting.write_manifest(out / "rwa_manifest.json", "validate-rwa", config)
    base = validation.base
    report = {
        "params": config,
        "rms_deviation": base.rms_deviation,
        "max_deviation": base.max_deviation,
        "nmax_convergence_ratio": validation.nmax_convergence_ratio,
        "gate": config["gate"],
        "passed": base.rms_deviation <= config["gate"],
        "manifest_hash": digest,
    }
    reporting.write_json(out / "rwa_report.json", report)
    header = ["t", "na1_full", "nb1_full", "na2_full", "p1_eff", "p2_eff", "p3_eff"]
    rows = ((base.times[i], *base.full_occupations[i], *base.effective_populations[i])
            for i in range(base.times.size))
    reporting.write_csv(out / "rwa_trajectories.csv", digest, header, rows)
    if not report["passed"]:
        print(f"rms deviation {base.rms_deviation:.4g} exceeds the gate {config['gate']:.4g}",
              file=sys.stderr)
        return EXIT_GATE
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

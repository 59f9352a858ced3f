"""Batch front door: config parsing, budget enforcement, CSV/manifest output.

A run is described by a flat JSON document (the canonical interface) whose
keys are validated against the schema of its subcommand; command-line flags
are sugar layered on top (``--set key=value`` plus a few dedicated flags)
and override file values.  Unknown keys are rejected.  Every run writes its
CSV artifacts plus a manifest echoing the fully resolved configuration; on
failure, partial outputs are removed.

Exit codes: 0 success, 2 configuration error, 3 budget refusal,
4 numerical non-convergence.  The default output directory can be set with
the ENTPERC_OUTPUT_DIR environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import AnalyticCurveSpec, evaluate_curve
from .engine import DEFAULT_BUDGET, check_budget, run_trajectory
from .errors import BudgetError, ConfigurationError, DomainError
from .frequencies import (BernoulliIIDModel, ExponentialDistanceModel,
                          GaussianIIDModel, ThresholdDistanceModel,
                          UniformModel, assign)
from .lattice import LatticeSpec, dump_csv, generate_lattice, perturb
from .manifest import write_csv, write_manifest
from .meanfield import critical_line_phi2, meanfield_dynamic, solve_fixed_point
from .presets import PRESET_NAMES, preset
from .stats import correlation_stats
from .twocolour import dynamic_two_colour, sweep_phase_diagram


class NonConvergenceError(RuntimeError):
    """A numerical solve failed to converge within its iteration budget."""


_REQUIRED = object()


@dataclass(frozen=True)
class Field:
    kind: str                     # int | float | str | bool | times | floats
    default: object = _REQUIRED
    choices: tuple = ()


_COMMON = {
    "master_seed": Field("int", 0),
    "out": Field("str", None),
    "threads": Field("int", None),
    "budget": Field("int", None),
}

_MODEL_KINDS = ("uniform", "gaussian_iid", "bernoulli_iid",
                "exponential_distance", "threshold_distance")

SCHEMAS = {
    "simulate": {
        "topology": Field("str", choices=("square", "triangular")),
        "L": Field("int"),
        "boundary": Field("str", "periodic", choices=("periodic", "open")),
        "sigma": Field("float", 0.0),
        "model": Field("str", choices=_MODEL_KINDS),
        "omega": Field("float", 1.0),
        "sigma_omega": Field("float", 0.1),
        "eta": Field("float", 0.5),
        "omega1": Field("float", 1.0),
        "omega2": Field("float", 2.0),
        "lam": Field("float", 1.0),
        "times": Field("times"),
        "n_disorder": Field("int", 4),
        "n_activation": Field("int", 20),
        "reshuffle": Field("bool", False),
        "coupled": Field("bool", False),
        **_COMMON,
    },
    "two-colour": {
        "mode": Field("str", choices=("sweep", "dynamic")),
        "L": Field("int"),
        "n_samples": Field("int", 20),
        "grid_step": Field("float", 0.02),
        "constrained": Field("bool", True),
        "omega_tilde": Field("float", 2.0),
        "times": Field("times", None),
        **_COMMON,
    },
    "meanfield": {
        "mode": Field("str", choices=("point", "grid", "critical-line", "dynamic")),
        "phi1": Field("float", 0.5),
        "phi2": Field("float", 0.5),
        "grid_step": Field("float", 0.02),
        "n_points": Field("int", 201),
        "omega_tilde": Field("float", 2.0),
        "times": Field("times", None),
        "tol": Field("float", 1e-12),
        "max_iter": Field("int", 10**6),
        **_COMMON,
    },
    "correlations": {
        "sigma": Field("floats"),
        "lam": Field("floats"),
        "n_samples": Field("int", 10**6),
        **_COMMON,
    },
    "analytic-p": {
        "kind": Field("str", choices=("gaussian", "bernoulli", "numeric")),
        "omega": Field("float", 1.0),
        "sigma_omega": Field("float", 0.1),
        "k_max": Field("int", 100),
        "eta": Field("float", 0.5),
        "omega1": Field("float", 1.0),
        "omega2": Field("float", 2.0),
        "density": Field("str", None, choices=("gaussian", "two_point")),
        "tolerance": Field("float", 1e-10),
        "times": Field("times", None),
        **_COMMON,
    },
    "lattice-dump": {
        "topology": Field("str", choices=("square", "triangular")),
        "L": Field("int"),
        "boundary": Field("str", "periodic", choices=("periodic", "open")),
        "sigma": Field("float", 0.0),
        "model": Field("str", None, choices=_MODEL_KINDS),
        "omega": Field("float", 1.0),
        "sigma_omega": Field("float", 0.1),
        "eta": Field("float", 0.5),
        "omega1": Field("float", 1.0),
        "omega2": Field("float", 2.0),
        "lam": Field("float", 1.0),
        **_COMMON,
    },
}


@dataclass(frozen=True)
class ExperimentConfig:
    subcommand: str
    parameters: dict
    master_seed: int
    output_dir: Path
    budget: int
    threads: int


def _coerce(key: str, spec: Field, value):
    if value is None and spec.default is None:
        return None
    try:
        if spec.kind == "int":
            if isinstance(value, bool) or (not isinstance(value, int)
                                           and float(value) != int(float(value))):
                raise ValueError
            return int(value)
        if spec.kind == "float":
            if isinstance(value, bool):
                raise ValueError
            return float(value)
        if spec.kind == "bool":
            if isinstance(value, bool):
                return value
            if isinstance(value, str) and value.lower() in ("true", "false"):
                return value.lower() == "true"
            raise ValueError
        if spec.kind == "str":
            if not isinstance(value, str):
                raise ValueError
            if spec.choices and value not in spec.choices:
                raise ConfigurationError(
                    f"key '{key}': {value!r} not one of {list(spec.choices)}")
            return value
        if spec.kind == "times":
            if isinstance(value, dict):
                extra = set(value) - {"start", "stop", "num"}
                if extra or "stop" not in value or "num" not in value:
                    raise ValueError
                grid = np.linspace(float(value.get("start", 0.0)),
                                   float(value["stop"]), int(value["num"]))
            else:
                grid = np.asarray([float(v) for v in value], dtype=float)
            if grid.size == 0 or np.any(np.diff(grid) < 0):
                raise ConfigurationError(f"key '{key}': times must be nonempty and sorted")
            return grid.tolist()
        if spec.kind == "floats":
            if isinstance(value, (int, float)) and not isinstance(value, bool):
                return [float(value)]
            return [float(v) for v in value]
    except ConfigurationError:
        raise
    except (TypeError, ValueError):
        pass
    raise ConfigurationError(f"key '{key}': expected {spec.kind}, got {value!r}")


def parse_config(subcommand: str, file_data: dict | None = None,
                 overrides: dict | None = None) -> ExperimentConfig:
    """Validate and fully resolve a run configuration.

    ``file_data`` is the JSON document (may carry its own matching
    'subcommand' key); ``overrides`` are flag-provided values that win over
    file keys.  Unknown keys, type mismatches and missing required keys all
    raise ConfigurationError.
    """
    if subcommand not in SCHEMAS:
        raise ConfigurationError(f"unknown subcommand {subcommand!r}")
    schema = SCHEMAS[subcommand]
    merged: dict = {}
    for source in (file_data or {}), (overrides or {}):
        for key, value in source.items():
            if key == "subcommand":
                if value != subcommand:
                    raise ConfigurationError(
                        f"config is for subcommand {value!r}, not {subcommand!r}")
                continue
            if key not in schema:
                raise ConfigurationError(
                    f"unknown key '{key}' for subcommand '{subcommand}'")
            merged[key] = value

    resolved: dict = {}
    missing = []
    for key, spec in schema.items():
        if key in merged:
            resolved[key] = _coerce(key, spec, merged[key])
        elif spec.default is _REQUIRED:
            missing.append(key)
        else:
            resolved[key] = spec.default
    if missing:
        raise ConfigurationError("missing required keys: " + ", ".join(sorted(missing)))

    out = resolved.pop("out") or os.environ.get("ENTPERC_OUTPUT_DIR", ".")
    threads = resolved.pop("threads")
    budget = resolved.pop("budget")
    master_seed = resolved.pop("master_seed")
    return ExperimentConfig(
        subcommand=subcommand, parameters=resolved, master_seed=master_seed,
        output_dir=Path(out), budget=DEFAULT_BUDGET if budget is None else int(budget),
        threads=1 if threads is None else max(1, int(threads)),
    )


def _build_model(params: dict):
    kind = params["model"]
    if kind == "uniform":
        return UniformModel(params["omega"])
    if kind == "gaussian_iid":
        return GaussianIIDModel(params["omega"], params["sigma_omega"])
    if kind == "bernoulli_iid":
        return BernoulliIIDModel(params["eta"], params["omega1"], params["omega2"])
    if kind == "exponential_distance":
        return ExponentialDistanceModel(params["omega"], params["lam"])
    return ThresholdDistanceModel(params["omega1"], params["omega2"], params["lam"])


def _config_echo(config: ExperimentConfig) -> dict:
    echo = dict(config.parameters)
    echo.update(master_seed=config.master_seed, out=str(config.output_dir),
                budget=config.budget, threads=config.threads)
    return echo


class _RunWriter:
    """Tracks written outputs so failures can clean up partial files."""

    def __init__(self, directory: Path):
        self.directory = directory
        self.outputs: list[str] = []
        directory.mkdir(parents=True, exist_ok=True)

    def csv(self, name: str, header, rows):
        write_csv(self.directory / name, header, rows)
        self.outputs.append(name)

    def discard(self):
        for name in self.outputs:
            try:
                os.unlink(self.directory / name)
            except OSError:
                pass


def run(config: ExperimentConfig, *, preset_info: dict | None = None) -> Path:
    """Execute a resolved config; returns the manifest path."""
    t0 = time.monotonic()
    writer = _RunWriter(config.output_dir)
    try:
        kind = _dispatch(config, writer)
    except BaseException:
        writer.discard()
        raise
    return write_manifest(
        config.output_dir, subcommand=config.subcommand, artifact_kind=kind,
        config=_config_echo(config), outputs=writer.outputs,
        wall_clock=time.monotonic() - t0, version=__version__,
        extra=preset_info)


def _dispatch(config: ExperimentConfig, writer: _RunWriter) -> str:
    p = config.parameters
    seed = config.master_seed
    if config.subcommand == "simulate":
        spec = LatticeSpec(p["topology"], p["L"], p["boundary"])
        record = run_trajectory(
            spec, p["sigma"], _build_model(p), p["times"], p["n_disorder"],
            p["n_activation"], seed, threads=config.threads,
            coupled=p["coupled"], reshuffled=p["reshuffle"], budget=config.budget)
        writer.csv("trajectory.csv", ("t", "p_hat", "P_hat", "stderr_P"),
                   zip(record.times, record.p_hat, record.P_hat, record.stderr_P))
        return "trajectory"

    if config.subcommand == "two-colour":
        if p["mode"] == "sweep":
            diagram = sweep_phase_diagram(p["L"], p["grid_step"], p["n_samples"],
                                          p["constrained"], seed,
                                          threads=config.threads, budget=config.budget)
            rows = ((f1, f2, diagram.S[i1, i2], diagram.stderr[i1, i2])
                    for i1, f1 in enumerate(diagram.phi1_grid)
                    for i2, f2 in enumerate(diagram.phi2_grid))
            writer.csv("sweep.csv", ("phi1", "phi2", "S", "stderr"), rows)
            return "two_colour_sweep"
        if p["times"] is None:
            raise ConfigurationError("dynamic mode requires 'times'")
        record = dynamic_two_colour(p["L"], p["omega_tilde"], p["times"],
                                    p["n_samples"], p["constrained"], seed,
                                    threads=config.threads, budget=config.budget)
        path_phis = _gamma_columns(p["omega_tilde"], record.times)
        writer.csv("dynamic.csv", ("t", "phi1", "phi2", "p", "P", "stderr_P"),
                   zip(record.times, path_phis[0], path_phis[1],
                       record.p_hat, record.P_hat, record.stderr_P))
        return "two_colour_dynamic"

    if config.subcommand == "meanfield":
        return _run_meanfield(config, writer)

    if config.subcommand == "correlations":
        n_cells = len(p["sigma"]) * len(p["lam"])
        check_budget(4 * p["n_samples"] * n_cells, config.budget)
        rows = []
        for sg in p["sigma"]:
            for lam in p["lam"]:
                c = correlation_stats(sg, lam, p["n_samples"], seed)
                rows.append((c.sigma, c.lam, c.eta, c.beta_par, c.beta_perp,
                             c.rho_par, c.rho_perp, c.n_samples))
        writer.csv("correlations.csv",
                   ("sigma", "lambda", "eta", "beta_par", "beta_perp",
                    "rho_par", "rho_perp", "n_samples"), rows)
        return "correlations"

    if config.subcommand == "analytic-p":
        times = np.asarray(p["times"] if p["times"] is not None
                           else np.linspace(0.0, 30.0, 601))
        spec = _analytic_spec(p)
        values = evaluate_curve(spec, times)
        writer.csv("analytic_p.csv", ("t", "p"), zip(times, values))
        return "analytic_p"

    # lattice-dump
    spec = LatticeSpec(p["topology"], p["L"], p["boundary"])
    lat = generate_lattice(spec)
    if p["sigma"] > 0:
        lat = perturb(lat, p["sigma"], seed)
    dump_csv(lat, writer.directory / "nodes.csv", writer.directory / "edges.csv")
    writer.outputs.extend(["nodes.csv", "edges.csv"])
    if p["model"] is not None:
        asg = assign(lat, _build_model(p), seed)
        writer.csv("frequencies.csv", ("edge", "omega"),
                   ((e, w) for e, w in enumerate(asg.omegas)))
    return "lattice_dump"


def _gamma_columns(ratio: float, times: np.ndarray):
    phi1 = 1.0 - np.abs(np.cos(times))
    phi2 = 1.0 - np.abs(np.cos(ratio * times))
    return phi1, phi2


def _analytic_spec(p: dict) -> AnalyticCurveSpec:
    if p["kind"] == "numeric":
        if p["density"] == "gaussian":
            om, sw = p["omega"], p["sigma_omega"]
            dens = lambda x: np.exp(-(x - om) ** 2 / (2 * sw * sw)) / np.sqrt(2 * np.pi * sw * sw)
            support, points = (om - 12 * sw, om + 12 * sw), None
        elif p["density"] == "two_point":
            eta_v, o1, o2, w = p["eta"], p["omega1"], p["omega2"], 1e-7
            dens = lambda x: (eta_v * np.exp(-(x - o1) ** 2 / (2 * w * w))
                              + (1 - eta_v) * np.exp(-(x - o2) ** 2 / (2 * w * w))) / np.sqrt(2 * np.pi * w * w)
            support = (min(o1, o2) - 1e-5, max(o1, o2) + 1e-5)
            points = (o1 - 5 * w, o1 + 5 * w, o2 - 5 * w, o2 + 5 * w)
        else:
            raise ConfigurationError("numeric kind requires density gaussian|two_point")
        return AnalyticCurveSpec(kind="numeric", density=dens, support=support,
                                 points=points, tolerance=p["tolerance"])
    return AnalyticCurveSpec(kind=p["kind"], omega=p["omega"],
                             sigma_omega=p["sigma_omega"], k_max=p["k_max"],
                             eta=p["eta"], omega1=p["omega1"], omega2=p["omega2"])


def _run_meanfield(config: ExperimentConfig, writer: _RunWriter) -> str:
    p = config.parameters
    tol, max_iter = p["tol"], p["max_iter"]
    if p["mode"] == "point":
        sol = solve_fixed_point(p["phi1"], p["phi2"], tol, max_iter)
        writer.csv("point.csv", ("phi1", "phi2", "m1", "m2", "S", "iterations", "converged"),
                   [(sol.phi1, sol.phi2, sol.m1, sol.m2, sol.S, sol.iterations,
                     sol.converged)])
        if not sol.converged:
            raise NonConvergenceError(f"fixed point at ({sol.phi1}, {sol.phi2})")
        return "meanfield_point"
    if p["mode"] == "grid":
        n_steps = round(1.0 / p["grid_step"])
        if abs(n_steps * p["grid_step"] - 1.0) > 1e-9:
            raise ConfigurationError("grid_step must divide 1")
        grid = np.linspace(0.0, 1.0, n_steps + 1)
        rows, bad = [], 0
        for f1 in grid:
            for f2 in grid:
                sol = solve_fixed_point(f1, f2, tol, max_iter)
                bad += not sol.converged
                rows.append((f1, f2, sol.S, 0.0))
        writer.csv("grid.csv", ("phi1", "phi2", "S", "stderr"), rows)
        if bad:
            raise NonConvergenceError(f"{bad} grid cells failed to converge")
        return "meanfield_grid"
    if p["mode"] == "critical-line":
        grid = np.linspace(0.0, 1.0, p["n_points"])
        writer.csv("critical_line.csv", ("phi1", "phi2"),
                   ((f1, critical_line_phi2(f1)) for f1 in grid))
        return "meanfield_critical_line"
    if p["times"] is None:
        raise ConfigurationError("dynamic mode requires 'times'")
    dyn = meanfield_dynamic(p["omega_tilde"], p["times"], tol)
    writer.csv("dynamic.csv", ("t", "phi1", "phi2", "p", "P", "stderr_P"),
               zip(dyn.times, dyn.phi1, dyn.phi2, dyn.p, dyn.P,
                   np.zeros(dyn.times.size)))
    if not dyn.converged:
        raise NonConvergenceError("mean-field dynamics failed to converge")
    return "meanfield_dynamic"


def run_preset(name: str, out_dir, full: bool, master_seed: int,
               threads: int | None, budget: int | None) -> list[Path]:
    """Execute every run of a preset into out_dir/<preset>/<run>/."""
    desc, runs = preset(name, full=full, master_seed=master_seed)
    manifests = []
    for run_spec in runs:
        params = dict(run_spec.params)
        if threads is not None:
            params["threads"] = threads
        if budget is not None:
            params["budget"] = budget
        params["out"] = str(Path(out_dir) / name / run_spec.name)
        config = parse_config(run_spec.subcommand, params)
        manifests.append(run(config, preset_info={
            "preset": name, "preset_run": run_spec.name, "description": desc,
            "preset_master_seed": master_seed, "full_scale": full}))
    return manifests


def _parse_set_values(pairs: list[str]) -> dict:
    overrides = {}
    for item in pairs:
        if "=" not in item:
            raise ConfigurationError(f"--set expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        try:
            overrides[key] = json.loads(raw)
        except json.JSONDecodeError:
            overrides[key] = raw
    return overrides


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entperc",
        description="Dynamical entanglement percolation experiments")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SCHEMAS:
        sp = sub.add_parser(name, help=f"run the {name} experiment")
        sp.add_argument("--config", type=Path, help="JSON config file")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config key (JSON-typed value)")
        sp.add_argument("--master-seed", type=int, default=None)
        sp.add_argument("--out", type=str, default=None)
        sp.add_argument("--threads", type=int, default=None)
        sp.add_argument("--budget", type=int, default=None)
    pp = sub.add_parser("preset", help="run a named experiment preset")
    pp.add_argument("name", choices=PRESET_NAMES)
    pp.add_argument("--full", action="store_true",
                    help="production scale instead of desk scale")
    pp.add_argument("--out", type=str, default=None)
    pp.add_argument("--master-seed", type=int, default=0)
    pp.add_argument("--threads", type=int, default=None)
    pp.add_argument("--budget", type=int, default=None)
    return parser


def _error(kind: str, message: str) -> None:
    print(json.dumps({"error": kind, "message": str(message)}), file=sys.stderr)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "preset":
            out = args.out or os.environ.get("ENTPERC_OUTPUT_DIR", ".")
            run_preset(args.name, out, args.full, args.master_seed,
                       args.threads, args.budget)
            return 0
        file_data = None
        if args.config is not None:
            with open(args.config, encoding="utf-8") as fh:
                file_data = json.load(fh)
        overrides = _parse_set_values(args.set)
        for key, value in (("master_seed", args.master_seed), ("out", args.out),
                           ("threads", args.threads), ("budget", args.budget)):
            if value is not None:
                overrides[key] = value
        config = parse_config(args.command, file_data, overrides)
        run(config)
        return 0
    except (ConfigurationError, DomainError, json.JSONDecodeError, OSError) as exc:
        _error("config", exc)
        return 2
    except BudgetError as exc:
        _error("budget", exc)
        return 3
    except NonConvergenceError as exc:
        _error("non-convergence", exc)
        return 4


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: parse a run configuration, compute, emit CSV.

Every command writes UTF-8 CSV with LF line endings: one '#'-prefixed
metadata line recording the tool version and the full parameter set, a
header row, then data rows.  Floats are written with their shortest
round-trip representation, undefined efficiencies as the literal NA, so
identical configurations produce byte-identical output.

Exit codes: 0 success, 2 usage error, 3 domain error, 4 compute error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import __version__
from .analysis import (
    SweepTable,
    efficiency_curve,
    make_grid,
    optimize_q,
    positive_work_boundary,
    sweep_omega,
    sweep_qa,
)
from .cycle import OttoCycleSpec, evaluate_cycle, per_level_diagnostics
from .errors import ComputeError, DomainError
from .spectrum import OscillatorParams, energy_ladder
from .thermo import DEFAULT_TAIL_TOL, entropy_temperature_curve, thermal_state

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_COMPUTE = 4

_RESULT_COLUMNS = [
    "work",
    "heat_in",
    "heat_out",
    "efficiency",
    "carnot",
    "positive_work",
    "n_max",
    "error",
]


class UsageError(Exception):
    """Bad invocation: missing parameters, unreadable config file."""


@dataclass
class RunConfig:
    """A fully resolved run: command, parameter map, output target."""

    command: str
    parameters: dict[str, Any]
    output_path: str = "-"
    tail_tol: float = DEFAULT_TAIL_TOL


# ---------------------------------------------------------------------------
# value formatting and the metadata line

def format_value(value: Any) -> str:
    if value is None:
        return "NA"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return repr(float(value))
    if isinstance(value, (tuple, list)):
        return ",".join(format_value(v) for v in value)
    return str(value)


def _metadata_line(config: RunConfig) -> str:
    parts = [f"# qotto v{__version__}", f"command={config.command}"]
    for key in sorted(config.parameters):
        if key == "jobs":
            # worker count never changes the data, keep output byte-stable
            continue
        parts.append(f"{key}={format_value(config.parameters[key])}")
    parts.append(f"tail_tol={format_value(config.tail_tol)}")
    return " ".join(parts)


def _parse_token(text: str) -> Any:
    if "," in text:
        return tuple(_parse_token(t) for t in text.split(","))
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def parse_metadata_line(line: str) -> RunConfig:
    """Rebuild an equivalent RunConfig from a CSV metadata line."""
    tokens = line.strip().split()
    if len(tokens) < 3 or tokens[0] != "#" or tokens[1] != "qotto":
        raise DomainError(f"not a qotto metadata line: {line!r}")
    parameters: dict[str, Any] = {}
    command = None
    for token in tokens[3:] if tokens[2].startswith("v") else tokens[2:]:
        key, _, raw = token.partition("=")
        if not raw:
            raise DomainError(f"malformed metadata token {token!r}")
        if key == "command":
            command = raw
        else:
            parameters[key] = _parse_token(raw)
    if command is None:
        raise DomainError("metadata line does not name a command")
    tail_tol = float(parameters.pop("tail_tol", DEFAULT_TAIL_TOL))
    return RunConfig(command=command, parameters=parameters, tail_tol=tail_tol)


def _write_csv(stream, config: RunConfig, header: list[str], rows) -> None:
    stream.write(_metadata_line(config) + "\n")
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(format_value(v) for v in row) + "\n")


# ---------------------------------------------------------------------------
# executors

def _required(config: RunConfig, *names: str) -> list[Any]:
    missing = [n for n in names if config.parameters.get(n) is None]
    if missing:
        raise UsageError(
            f"command '{config.command}' needs --{', --'.join(m.replace('_', '-') for m in missing)}"
        )
    return [config.parameters[n] for n in names]


def _sanitize(message: str) -> str:
    return message.replace(",", ";").replace("\n", " ")


def _result_cells(row) -> list[Any]:
    if row.result is None:
        return [None] * 6 + [None, _sanitize(row.error or "failed")]
    r = row.result
    return [
        r.work,
        r.heat_in,
        r.heat_out,
        r.efficiency,
        r.carnot,
        r.positive_work,
        r.n_max_used,
        "",
    ]


def _sweep_rows(table: SweepTable) -> list[list[Any]]:
    return [list(row.values) + _result_cells(row) for row in table.rows]


def _grid_from(config: RunConfig, start_key="grid_start", stop_key="grid_stop", step_key="grid_step"):
    start, stop, step = _required(config, start_key, stop_key, step_key)
    return make_grid(float(start), float(stop), float(step))


def _jobs(config: RunConfig) -> int:
    jobs = config.parameters.get("jobs")
    return int(jobs) if jobs is not None else (os.cpu_count() or 1)


def _run_energies(config: RunConfig):
    qa, omega, n_max = _required(config, "qa", "omega", "n_max")
    ladder = energy_ladder(OscillatorParams(float(omega), float(qa)), int(n_max))
    rows = [[n, float(e)] for n, e in enumerate(ladder)]
    return ["n", "energy"], rows


def _run_thermal(config: RunConfig):
    qa, omega, th = _required(config, "qa", "omega", "th")
    n_max = config.parameters.get("n_max")
    state = thermal_state(
        OscillatorParams(float(omega), float(qa)),
        float(th),
        config.tail_tol,
        n_max=int(n_max) if n_max is not None else None,
    )
    rows = [
        [n, float(state.energies[n]), float(state.populations[n])]
        for n in range(state.n_max + 1)
    ]
    return ["n", "energy", "population"], rows


def _run_st_curve(config: RunConfig):
    qa, omega = _required(config, "qa", "omega")
    grid = _grid_from(config)
    curve = entropy_temperature_curve(
        OscillatorParams(float(omega), float(qa)), grid, config.tail_tol
    )
    return ["temperature", "entropy"], [[float(t), float(s)] for t, s in curve]


def _cycle_params(config: RunConfig) -> tuple[OscillatorParams, OscillatorParams]:
    qa, qc = _required(config, "qa", "qc")
    omega = config.parameters.get("omega")
    omega_a = config.parameters.get("omega_a", omega)
    omega_c = config.parameters.get("omega_c", omega)
    if omega_a is None or omega_c is None:
        raise UsageError("cycle needs --omega or both --omega-a and --omega-c")
    return (
        OscillatorParams(float(omega_a), float(qa)),
        OscillatorParams(float(omega_c), float(qc)),
    )


def _run_cycle(config: RunConfig):
    th, tc = _required(config, "th", "tc")
    hot, cold = _cycle_params(config)
    result = evaluate_cycle(
        OttoCycleSpec(float(th), float(tc), hot, cold, config.tail_tol)
    )
    row = [
        result.work,
        result.heat_in,
        result.heat_out,
        result.efficiency,
        result.carnot,
        result.positive_work,
        result.n_max_used,
        "",
    ]
    return _RESULT_COLUMNS, [row]


def _run_sweep_qa(config: RunConfig):
    qc, th, tc, omega = _required(config, "qc", "th", "tc", "omega")
    table = sweep_qa(
        float(qc), float(th), float(tc), float(omega),
        _grid_from(config), config.tail_tol, _jobs(config),
    )
    return ["q_a"] + _RESULT_COLUMNS, _sweep_rows(table)


def _run_sweep_omega(config: RunConfig):
    qa, qc, th, tc = _required(config, "qa", "qc", "th", "tc")
    omega_c = config.parameters.get("omega_c")
    table = sweep_omega(
        float(qa), float(qc), float(th), float(tc),
        _grid_from(config),
        omega_cold=float(omega_c) if omega_c is not None else None,
        tail_tol=config.tail_tol,
        jobs=_jobs(config),
    )
    return [table.swept_names[0]] + _RESULT_COLUMNS, _sweep_rows(table)


def _run_boundary(config: RunConfig):
    qc, th, tc, omega = _required(config, "qc", "th", "tc", "omega")
    tol = float(config.parameters.get("tol") or 1e-6)
    boundary = positive_work_boundary(
        float(qc), float(th), float(tc), float(omega), tol, tail_tol=config.tail_tol
    )
    return ["boundary_q_a", "tol"], [[boundary, tol]]


def _run_optimize(config: RunConfig):
    objective, free = _required(config, "objective", "free")
    th, tc, omega = _required(config, "th", "tc", "omega")
    if free not in ("qa", "qc"):
        raise UsageError(f"--free must be qa or qc, got {free!r}")
    fixed_key = "qc" if free == "qa" else "qa"
    (q_fixed,) = _required(config, fixed_key)
    grid_start = config.parameters.get("grid_start")
    report = optimize_q(
        str(objective),
        "q_hot" if free == "qa" else "q_cold",
        float(th),
        float(tc),
        float(omega),
        float(q_fixed),
        grid_step=float(config.parameters.get("grid_step") or 1e-3),
        refine_tol=float(config.parameters.get("tol") or 1e-6),
        grid_start=float(grid_start) if grid_start is not None else None,
        grid_stop=float(config.parameters.get("grid_stop") or 1.0),
        tail_tol=config.tail_tol,
        jobs=_jobs(config),
    )
    header = [
        "objective", "free", "argmax", "max_value",
        "bracket_lo", "bracket_hi", "refinement_tol",
    ]
    row = [
        report.objective, free, report.argmax, report.max_value,
        report.bracket[0], report.bracket[1], report.refinement_tol,
    ]
    return header, [row]


def _run_efficiency_curve(config: RunConfig):
    qc, th, tc, omega = _required(config, "qc", "th", "tc", "omega")
    table = efficiency_curve(
        float(qc), float(th), float(tc), float(omega),
        _grid_from(config), config.tail_tol, _jobs(config),
    )
    rows = [
        [row.values[0], row.result.efficiency, row.result.work,
         row.result.carnot, row.result.n_max_used]
        for row in table.rows
    ]
    return ["q_a", "efficiency", "work", "carnot", "n_max"], rows


# ---------------------------------------------------------------------------
# figure presets

_FIGURE_PRESETS: dict[int, dict[str, Any]] = {
    1: dict(qa=0.4, qc=1.0, omega=1.0, grid_start=0.02, grid_stop=0.6, grid_step=0.005),
    2: dict(omega=1.0, grid_start=0.1, grid_stop=1.0, grid_step=0.005, n_max=4),
    3: dict(th=0.5, tc=0.1, qc=1.0, omega=1.0, grid_start=0.05, grid_stop=1.0,
            grid_step=0.01, n_max=12),
    4: dict(th=0.5, tc=0.1, qc=1.0, omega=1.0, grid_start=0.05, grid_stop=1.0,
            grid_step=0.01, n_max=12),
    5: dict(th=0.5, tc=0.1, omega=1.0, qc_values=(1.0, 0.8, 0.6),
            grid_start=0.01, grid_stop=1.0, grid_step=1e-3),
    6: dict(th=0.5, tc=0.1, omega=1.0, qc_values=(1.0, 0.8, 0.6),
            grid_start=0.01, grid_stop=1.0, grid_step=1e-3),
    7: dict(qa=0.4, th=1.0, tc=0.1, qc_values=(1.0, 0.8, 0.6),
            grid_start=0.05, grid_stop=1.0, grid_step=0.01),
    8: dict(omega_c=0.5, th=0.5, tc=0.1, q_values=(1.0, 0.8, 0.6),
            grid_start=0.05, grid_stop=2.0, grid_step=0.01),
    9: dict(th=5.0, tc=0.1, omega=1.0, qc_values=(1.0, 0.8, 0.6),
            grid_start=0.01, grid_stop=1.0, grid_step=1e-3),
    10: dict(th=100.0, tc=0.1, omega=1.0, qc_values=(1.0, 0.8, 0.6),
             grid_start=0.01, grid_stop=1.0, grid_step=1e-3),
}


def figure_preset(figure_id: int) -> RunConfig:
    """The parameter set behind the `figure <id>` command, ids 1 through 10."""
    if figure_id not in _FIGURE_PRESETS:
        raise DomainError(f"unknown figure id {figure_id!r}; supported: 1..10")
    parameters = dict(_FIGURE_PRESETS[figure_id])
    parameters["figure_id"] = figure_id
    return RunConfig(command="figure", parameters=parameters)


def _run_figure(config: RunConfig):
    (figure_id,) = _required(config, "figure_id")
    figure_id = int(figure_id)
    if figure_id not in _FIGURE_PRESETS:
        raise DomainError(f"unknown figure id {figure_id!r}; supported: 1..10")
    p = config.parameters
    jobs = _jobs(config)
    grid = _grid_from(config)

    if figure_id == 1:
        curves = [
            entropy_temperature_curve(
                OscillatorParams(float(p["omega"]), float(q)), grid, config.tail_tol
            )
            for q in (p["qa"], p["qc"])
        ]
        header = ["temperature"] + [
            f"entropy_q_{format_value(float(q))}" for q in (p["qa"], p["qc"])
        ]
        rows = [
            [float(t)] + [float(curve[i][1]) for curve in curves]
            for i, t in enumerate(grid)
        ]
        return header, rows

    if figure_id == 2:
        levels = list(range(1, int(p["n_max"]) + 1))
        header = ["q"] + [f"e_{n}" for n in levels]
        rows = []
        for q in grid:
            ladder = energy_ladder(OscillatorParams(float(p["omega"]), float(q)), levels[-1])
            rows.append([float(q)] + [float(ladder[n]) for n in levels])
        return header, rows

    if figure_id in (3, 4):
        levels = int(p["n_max"]) + 1
        cold = OscillatorParams(float(p["omega"]), float(p["qc"]))
        rows = []
        for q in grid:
            spec = OttoCycleSpec(
                float(p["th"]), float(p["tc"]),
                OscillatorParams(float(p["omega"]), float(q)), cold, config.tail_tol,
            )
            diag = per_level_diagnostics(spec, min_levels=levels)
            for n in range(levels):
                rows.append([
                    float(q), n,
                    float(diag.delta_populations[n]),
                    float(diag.delta_energies[n]),
                    float(diag.work_terms[n]),
                ])
        return ["q_a", "n", "delta_p", "delta_e", "work_term"], rows

    if figure_id in (5, 9):
        tables = [
            sweep_qa(float(qc), float(p["th"]), float(p["tc"]), float(p["omega"]),
                     grid, config.tail_tol, jobs)
            for qc in p["qc_values"]
        ]
        header = ["q_a"] + [f"work_qc_{format_value(float(qc))}" for qc in p["qc_values"]]
        rows = [
            [float(grid[i])] + [
                None if t.rows[i].result is None else t.rows[i].result.work
                for t in tables
            ]
            for i in range(len(grid))
        ]
        return header, rows

    if figure_id in (6, 10):
        tables = [
            sweep_qa(float(qc), float(p["th"]), float(p["tc"]), float(p["omega"]),
                     grid, config.tail_tol, jobs)
            for qc in p["qc_values"]
        ]
        header = ["q_a"] + [f"eta_qc_{format_value(float(qc))}" for qc in p["qc_values"]]
        rows = [
            [float(grid[i])] + [
                None if t.rows[i].result is None else t.rows[i].result.efficiency
                for t in tables
            ]
            for i in range(len(grid))
        ]
        return header, rows

    if figure_id == 7:
        tables = [
            sweep_omega(float(p["qa"]), float(qc), float(p["th"]), float(p["tc"]),
                        grid, tail_tol=config.tail_tol, jobs=jobs)
            for qc in p["qc_values"]
        ]
        header = ["omega"] + [f"work_qc_{format_value(float(qc))}" for qc in p["qc_values"]]
        rows = [
            [float(grid[i])] + [
                None if t.rows[i].result is None else t.rows[i].result.work
                for t in tables
            ]
            for i in range(len(grid))
        ]
        return header, rows

    # figure 8: hot-side frequency sweep at equal deformation on both sides
    tables = [
        sweep_omega(float(q), float(q), float(p["th"]), float(p["tc"]),
                    grid, omega_cold=float(p["omega_c"]),
                    tail_tol=config.tail_tol, jobs=jobs)
        for q in p["q_values"]
    ]
    header = ["omega_a"] + [f"work_q_{format_value(float(q))}" for q in p["q_values"]]
    rows = [
        [float(grid[i])] + [
            None if t.rows[i].result is None else t.rows[i].result.work
            for t in tables
        ]
        for i in range(len(grid))
    ]
    return header, rows


_EXECUTORS = {
    "energies": _run_energies,
    "thermal": _run_thermal,
    "st-curve": _run_st_curve,
    "cycle": _run_cycle,
    "sweep-qa": _run_sweep_qa,
    "sweep-omega": _run_sweep_omega,
    "boundary": _run_boundary,
    "optimize": _run_optimize,
    "efficiency-curve": _run_efficiency_curve,
    "figure": _run_figure,
}

_COMMAND_DEFAULTS: dict[str, dict[str, Any]] = {
    "energies": dict(n_max=20),
    "thermal": dict(),
    "st-curve": dict(grid_start=0.02, grid_stop=1.0, grid_step=0.01),
    "cycle": dict(),
    "sweep-qa": dict(grid_start=0.01, grid_stop=1.0, grid_step=1e-3),
    "sweep-omega": dict(grid_start=0.05, grid_stop=1.0, grid_step=0.01),
    "boundary": dict(tol=1e-6),
    "optimize": dict(objective="work", grid_step=1e-3, tol=1e-6),
    "efficiency-curve": dict(grid_start=0.01, grid_stop=1.0, grid_step=1e-3),
    "figure": dict(),
}


def run(config: RunConfig, stream=None) -> None:
    """Execute a resolved configuration, writing CSV to the output target."""
    executor = _EXECUTORS.get(config.command)
    if executor is None:
        raise UsageError(f"unknown command {config.command!r}")
    header, rows = executor(config)
    if stream is not None:
        _write_csv(stream, config, header, rows)
    elif config.output_path == "-":
        _write_csv(sys.stdout, config, header, rows)
    else:
        with open(config.output_path, "w", encoding="utf-8", newline="") as handle:
            _write_csv(handle, config, header, rows)


# ---------------------------------------------------------------------------
# argument parsing

_FLAGS: dict[str, dict[str, Any]] = {
    "th": dict(type=float, help="hot-bath temperature"),
    "tc": dict(type=float, help="cold-bath temperature"),
    "qa": dict(type=float, help="hot-side deformation parameter"),
    "qc": dict(type=float, help="cold-side deformation parameter"),
    "omega": dict(type=float, help="oscillator frequency (both sides)"),
    "omega-a": dict(type=float, help="hot-side frequency"),
    "omega-c": dict(type=float, help="cold-side frequency"),
    "grid-start": dict(type=float, help="first grid value"),
    "grid-stop": dict(type=float, help="last grid value"),
    "grid-step": dict(type=float, help="grid spacing"),
    "tol": dict(type=float, help="solver / refinement tolerance"),
    "n-max": dict(type=int, help="number of levels (command specific)"),
    "objective": dict(type=str, choices=("work", "efficiency"), help="optimize target"),
    "free": dict(type=str, choices=("qa", "qc"), help="parameter to optimize over"),
}

_COMMAND_FLAGS = {
    "energies": ("qa", "omega", "n-max"),
    "thermal": ("qa", "omega", "th", "n-max"),
    "st-curve": ("qa", "omega", "grid-start", "grid-stop", "grid-step"),
    "cycle": ("th", "tc", "qa", "qc", "omega", "omega-a", "omega-c"),
    "sweep-qa": ("qc", "th", "tc", "omega", "grid-start", "grid-stop", "grid-step"),
    "sweep-omega": ("qa", "qc", "th", "tc", "omega-c", "grid-start", "grid-stop", "grid-step"),
    "boundary": ("qc", "th", "tc", "omega", "tol"),
    "optimize": ("objective", "free", "qa", "qc", "th", "tc", "omega",
                 "grid-start", "grid-stop", "grid-step", "tol"),
    "efficiency-curve": ("qc", "th", "tc", "omega", "grid-start", "grid-stop", "grid-step"),
    "figure": ("grid-start", "grid-stop", "grid-step"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qotto",
        description="Quantum Otto cycles with a q-deformed oscillator working substance.",
    )
    parser.add_argument("--version", action="version", version=f"qotto {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command, flags in _COMMAND_FLAGS.items():
        sub = subparsers.add_parser(command, help=f"run the {command} computation")
        if command == "figure":
            sub.add_argument("figure_id", type=int, help="figure preset id (1..10)")
        for flag in flags:
            sub.add_argument(f"--{flag}", default=None, **_FLAGS[flag])
        sub.add_argument("--tail-tol", type=float, default=None,
                         help="certified truncation tolerance (default 1e-12)")
        sub.add_argument("--jobs", type=int, default=None,
                         help="worker processes for sweeps (default: cpu count)")
        sub.add_argument("--output", type=str, default=None,
                         help="output CSV path, '-' for stdout (default)")
        sub.add_argument("--config", type=str, default=None,
                         help="JSON file with parameter values; flags override it")
    return parser


def _load_config_file(path: str) -> dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    return data


def build_config(args: argparse.Namespace) -> RunConfig:
    """Resolve precedence: command defaults < figure preset < config file < flags."""
    command = args.command
    parameters = dict(_COMMAND_DEFAULTS[command])
    if command == "figure":
        parameters.update(figure_preset(args.figure_id).parameters)

    tail_tol = DEFAULT_TAIL_TOL
    output = "-"
    if args.config:
        known = {flag.replace("-", "_") for flag in _COMMAND_FLAGS[command]}
        known |= {"tail_tol", "jobs", "output"}
        for key, value in _load_config_file(args.config).items():
            if key not in known:
                raise UsageError(f"config key {key!r} not valid for '{command}'")
            if key == "tail_tol":
                tail_tol = float(value)
            elif key == "output":
                output = str(value)
            else:
                parameters[key] = value

    for flag in _COMMAND_FLAGS[command] + ("jobs",):
        attr = flag.replace("-", "_")
        value = getattr(args, attr, None)
        if value is not None:
            parameters[attr] = value
    if args.tail_tol is not None:
        tail_tol = args.tail_tol
    if args.output is not None:
        output = args.output
    if not (0.0 < tail_tol < 1.0):
        raise DomainError(f"tail_tol must lie in (0, 1), got {tail_tol!r}")
    return RunConfig(command=command, parameters=parameters,
                     output_path=output, tail_tol=tail_tol)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        config = build_config(args)
        run(config)
    except UsageError as exc:
        print(f"qotto: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"qotto: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ComputeError as exc:
        print(f"qotto: compute error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

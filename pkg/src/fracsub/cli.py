#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
fracsub command-line interface.

Subcommands:
    solve        one solve from a YAML config or a built-in example
    table        reproduce an error table of the example catalog
    sweep        solve a config over a list of nu1 values
    convergence  empirical convergence orders under grid refinement
    kernel-sign  sample the kernel N(t) and report its sign change

Exit codes: 0 success, 2 configuration or usage error, 3 numerical failure.
"""

import contextlib
import dataclasses
import functools
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

import click
import numpy as np
from rich.console import Console
from rich.table import Table

from . import __version__
from .config import (
    RunConfig,
    apply_overrides,
    build_grid,
    build_problem,
    canonical_hash,
    config_hash,
    load_config,
    nu2_divisor,
    output_root,
)
from .errors import NUMERICAL_ERRORS, ConfigError, DomainError, ExpressionError
from .export import ResultExporter
from .numerics.kernels import PRESET_HORIZONS, KernelPreset, KernelSpec, kernel_profile, preset_spec
from .solvers.solver1d import solve, validate_compatibility
from .solvers.solver2d import Grid2D, solve_2d, validate_compatibility_2d
from .verification.catalog import ExampleCase, ExampleId, cases_for
from .verification.mms import (
    ErrorReport,
    RefinementAxis,
    convergence_study,
    grid_summary,
    level_errors,
    run_case,
    solve_case,
)
from .verification.residual import require_consistent_forcing

logger = logging.getLogger(__name__)

console = Console()
err_console = Console(stderr=True)

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

LOG_FORMAT = '%(asctime)s - [%(name)s] - %(levelname)s - %(message)s'

EXAMPLE_IDS = [e.value for e in ExampleId]


def configure_logging(verbose: int) -> None:
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger("fracsub").setLevel(level)


def handle_errors(func: Callable) -> Callable:
    """Map fracsub errors to the stable exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (ConfigError, ExpressionError) as exc:
            err_console.print(f"[red]config error:[/red] {exc}", highlight=False)
            sys.exit(EXIT_CONFIG)
        except NUMERICAL_ERRORS as exc:
            err_console.print(
                f"[red]numerical failure ({type(exc).__name__}):[/red] {exc}", highlight=False
            )
            sys.exit(EXIT_NUMERICAL)

    return wrapper


@contextlib.contextmanager
def setup_errors():
    """Domain errors while building a run are configuration errors."""
    try:
        yield
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def _richardson(value: Optional[str]) -> Optional[bool]:
    if value is None:
        return None
    return value == "on"


def _grid_for_case(case: ExampleCase, K=None, Kx=None, Ky=None, J=None):
    grid = case.default_grid()
    changes: Dict[str, int] = {}
    if isinstance(grid, Grid2D):
        changes = {"Kx": Kx, "Ky": Ky, "J": J}
    else:
        changes = {"K": K, "J": J}
    return dataclasses.replace(grid, **{k: v for k, v in changes.items() if v is not None})


def _make_case(example: str, nu1: float, nu2_rule: Optional[str], rho2=None, T=None) -> ExampleCase:
    nu2 = nu1 / nu2_divisor(nu2_rule) if nu2_rule else None
    return ExampleCase(ExampleId(example), nu1, nu2=nu2, T=T, rho2=rho2)


def _grid_dict(grid) -> Dict[str, Any]:
    return dataclasses.asdict(grid)


def _run_pool(func: Callable, items: Sequence, jobs: int) -> List:
    """Map ``func`` over ``items`` in order, in up to ``jobs`` processes."""
    if jobs <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(func, items))


# ========== workers (top level so they pickle) ==========

def _table_worker(task) -> ErrorReport:
    case, grid, richardson = task
    return run_case(case, grid, richardson)


def _sweep_worker(config: RunConfig):
    problem = build_problem(config)
    grid = build_grid(config)
    if config.dimension == 2:
        return solve_2d(problem, grid, config.solver.richardson)
    return solve(problem, grid, config.solver.richardson)


# ========== output helpers ==========

def _summary_table(title: str, rows: Iterable[Sequence[Any]]) -> Table:
    table = Table(title=title, show_header=True)
    table.add_column("Parameter", style="cyan")
    table.add_column("Value", style="green")
    for key, value in rows:
        table.add_row(str(key), str(value))
    return table


def _report_table(title: str, reports: Sequence[ErrorReport]) -> Table:
    table = Table(title=title, show_header=True)
    extension = any(r.rho2 is not None for r in reports)
    table.add_column("nu1", style="cyan")
    table.add_column("nu2")
    if extension:
        table.add_column("rho2")
        table.add_column("T")
    table.add_column("gimel", style="green")
    table.add_column("reference")
    table.add_column("ratio")
    table.add_column("seconds", style="dim")
    for r in reports:
        row = [f"{r.nu1:g}", f"{r.nu2:.4g}"]
        if extension:
            row += [f"{r.rho2:g}", f"{r.T:g}"]
        ratio = r.ratio_to_reference
        row += [
            f"{r.gimel:.4e}",
            f"{r.reference:.4e}" if r.reference is not None else "-",
            f"{ratio:.2f}" if ratio is not None else "-",
            f"{r.seconds:.1f}",
        ]
        table.add_row(*row)
    return table


def _flags(**flags: Any) -> Dict[str, Any]:
    return {k: v for k, v in flags.items() if v is not None and v != ()}


# ========== command group ==========

@click.group()
@click.version_option(__version__, prog_name="fracsub")
@click.option("-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG logging")
def main(verbose: int):
    """Solvers for multi-term time-fractional subdiffusion equations with memory."""
    configure_logging(verbose)


def grid_options(func: Callable) -> Callable:
    for option in reversed([
        click.option("--K", "K", type=click.IntRange(min=2), help="spatial intervals (1D)"),
        click.option("--Kx", "Kx", type=click.IntRange(min=2), help="x intervals (2D)"),
        click.option("--Ky", "Ky", type=click.IntRange(min=2), help="y intervals (2D)"),
        click.option("--J", "J", type=click.IntRange(min=1), help="time steps"),
    ]):
        func = option(func)
    return func


@main.command("solve")
@click.option("--config", "config_path", type=click.Path(dir_okay=False, path_type=Path),
              help="YAML run config")
@click.option("--example", type=click.Choice(EXAMPLE_IDS), help="built-in manufactured example")
@click.option("--nu1", type=float, help="leading order (required with --example)")
@click.option("--nu2-rule", help="nu2 = nu1/2 (half), nu1/3 (third) or nu1/<divisor>")
@click.option("--rho2", type=float, help="constant rho2 for ex1ext")
@click.option("--T", "T", type=float, help="final time for ex1ext")
@grid_options
@click.option("--richardson", type=click.Choice(["on", "off"]),
              help="Richardson extrapolation in time")
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), help="output root")
@click.option("--dry-run", is_flag=True, help="validate and print the parameters without solving")
@click.option("--profile", is_flag=True,
              help="also write u(x, T) (and the exact solution for examples); 1D only")
@handle_errors
def solve_cmd(config_path, example, nu1, nu2_rule, rho2, T, K, Kx, Ky, J, richardson, out, dry_run,
              profile):
    """Solve one problem and write its history and manifest."""
    if bool(config_path) == bool(example):
        raise click.UsageError("give exactly one of --config or --example")

    case: Optional[ExampleCase] = None
    with setup_errors():
        if config_path:
            config = load_config(config_path)
            config = apply_overrides(
                config,
                problem={"nu1": nu1, "nu2_rule": nu2_rule},
                grid={"K": K, "Kx": Kx, "Ky": Ky, "J": J},
                solver={"richardson": _richardson(richardson), "profile": profile or None},
            )
            problem = build_problem(config)
            grid = build_grid(config)
            use_richardson = config.solver.richardson
            profile = config.solver.profile
            name = config.name
            digest = config_hash(config)
            root = output_root(out, config)
        else:
            if nu1 is None:
                raise click.UsageError("--example needs --nu1")
            case = _make_case(example, nu1, nu2_rule, rho2, T)
            problem = case.build_problem()
            grid = _grid_for_case(case, K, Kx, Ky, J)
            use_richardson = _richardson(richardson) is not False
            name = case.label
            digest = canonical_hash({
                "example": case.id.value, "nu1": case.nu1, "nu2": case.nu2,
                "T": case.T, "rho2": case.rho2,
            })
            root = output_root(out)

    if profile and isinstance(grid, Grid2D):
        raise click.UsageError("--profile writes u(x, T) and is only available for 1D problems")

    summary = [
        ("name", name),
        ("dimension", 2 if isinstance(grid, Grid2D) else 1),
        ("nu1", f"{problem.nu1:g}"),
        ("nu2", f"{problem.nu2:.6g}"),
        ("kernel", problem.kernel.describe()),
        ("T", f"{problem.T:g}"),
        ("grid", ", ".join(f"{k}={v}" for k, v in grid_summary(grid).items())),
        ("richardson", "on" if use_richardson else "off"),
    ]
    if dry_run:
        console.print(_summary_table("fracsub solve (dry run)", summary))
        if isinstance(grid, Grid2D):
            diagnostics = validate_compatibility_2d(problem, grid)
        else:
            diagnostics = validate_compatibility(problem)
        for diagnostic in diagnostics:
            console.print(f"[yellow]warning:[/yellow] {diagnostic}", highlight=False)
        click.echo("dry run: configuration is valid")
        return

    started = time.perf_counter()
    if case is not None:
        history = solve_case(case, grid, use_richardson)
    elif isinstance(grid, Grid2D):
        history = solve_2d(problem, grid, use_richardson)
    else:
        history = solve(problem, grid, use_richardson)
    seconds = time.perf_counter() - started

    exporter = ResultExporter(root / name)
    outputs = []
    if isinstance(grid, Grid2D):
        parameters = {"nu1": problem.nu1, "nu2": problem.nu2}
        outputs.append(exporter.write_history_2d(history, "solution", parameters))
    else:
        outputs.append(exporter.write_history_csv(history))
        if profile:
            exact = case.exact if case is not None else None
            outputs.append(exporter.write_profile_at_final(history, exact))

    payload: Dict[str, Any] = {
        "command": "solve",
        "config_hash": digest,
        "parameters": dict(summary),
        "grid": _grid_dict(grid),
        "flags": _flags(config=config_path, example=example, nu2_rule=nu2_rule,
                        richardson=use_richardson, profile=profile),
        "timings": {"solve_seconds": seconds},
        "outputs": [str(p) for p in outputs],
    }
    if case is not None:
        errors = level_errors(case, history)
        gimel = float(np.max(errors))
        payload["gimel"] = gimel
        payload["reference"] = case.reference_gimel
        rows = summary + [("gimel", f"{gimel:.4e}")]
        console.print(_summary_table(f"fracsub solve: {name}", rows))
        click.echo(f"gimel = {gimel:.6e}")
    else:
        console.print(_summary_table(f"fracsub solve: {name}", summary))
    exporter.write_manifest(payload)
    click.echo(f"wrote {exporter.output_dir}")


@main.command("table")
@click.argument("example", type=click.Choice(EXAMPLE_IDS))
@click.option("--nu1", "nu1_values", type=float, multiple=True,
              help="restrict to these nu1 (repeatable)")
@grid_options
@click.option("--richardson", type=click.Choice(["on", "off"]), default="on", show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True,
              help="parallel solves")
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), help="output root")
@handle_errors
def table_cmd(example, nu1_values, K, Kx, Ky, J, richardson, jobs, out):
    """Reproduce the error table of a catalog example."""
    with setup_errors():
        cases = cases_for(example, list(nu1_values) or None)
        tasks = [(case, _grid_for_case(case, K, Kx, Ky, J), richardson == "on") for case in cases]

    # no table against a forcing that does not match its exact solution
    checks = require_consistent_forcing(cases)
    started = time.perf_counter()
    reports = _run_pool(_table_worker, tasks, jobs)
    seconds = time.perf_counter() - started

    console.print(_report_table(f"gimel for {example}", reports))
    exporter = ResultExporter(output_root(out) / f"table_{example}")
    csv_path = exporter.write_table_csv(reports)
    exporter.write_manifest({
        "command": "table",
        "config_hash": canonical_hash({
            "example": example,
            "grids": [_grid_dict(g) for _, g, _ in tasks],
            "richardson": richardson,
        }),
        "parameters": {"example": example, "nu1": [c.nu1 for c in cases]},
        "flags": _flags(richardson=richardson, jobs=jobs),
        "timings": {"total_seconds": seconds, "rows": [r.seconds for r in reports]},
        "residuals": {c.case: c.worst.residual for c in checks},
        "outputs": [str(csv_path)],
    })
    click.echo(f"wrote {csv_path}")


@main.command("sweep")
@click.option("--config", "config_path", required=True,
              type=click.Path(dir_okay=False, path_type=Path))
@click.option("--nu1", "nu1_values", type=float, multiple=True, required=True,
              help="nu1 values (repeatable)")
@click.option("--nu2-rule", default="half", show_default=True)
@grid_options
@click.option("--richardson", type=click.Choice(["on", "off"]))
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path))
@handle_errors
def sweep_cmd(config_path, nu1_values, nu2_rule, K, Kx, Ky, J, richardson, jobs, out):
    """Solve one config for several nu1 (nu2 by rule), concurrently."""
    with setup_errors():
        base = load_config(config_path)
        configs = [
            apply_overrides(
                base,
                problem={"nu1": nu1, "nu2_rule": nu2_rule},
                grid={"K": K, "Kx": Kx, "Ky": Ky, "J": J},
                solver={"richardson": _richardson(richardson)},
            )
            for nu1 in nu1_values
        ]

    started = time.perf_counter()
    histories = _run_pool(_sweep_worker, configs, jobs)
    seconds = time.perf_counter() - started

    exporter = ResultExporter(output_root(out, base) / f"sweep_{base.name}")
    table = Table(title=f"sweep {base.name}", show_header=True)
    for column in ("nu1", "nu2", "max |u(T)|", "seconds"):
        table.add_column(column)
    outputs = []
    for config, history in zip(configs, histories):
        nu1, nu2 = config.problem.orders
        folder = f"nu1={nu1:g}"
        if config.dimension == 2:
            outputs.append(exporter.write_history_2d(history, folder, {"nu1": nu1, "nu2": nu2}))
        else:
            outputs.append(exporter.write_history_csv(history, f"{folder}/solution.csv"))
        peak = np.max(np.abs(history.final))
        table.add_row(f"{nu1:g}", f"{nu2:.4g}", f"{peak:.6g}", f"{history.seconds:.2f}")
    console.print(table)
    exporter.write_manifest({
        "command": "sweep",
        "config_hash": config_hash(base),
        "parameters": {"nu1": list(nu1_values), "nu2_rule": nu2_rule},
        "flags": _flags(jobs=jobs, richardson=richardson),
        "timings": {"total_seconds": seconds, "runs": [h.seconds for h in histories]},
        "outputs": [str(p) for p in outputs],
    })
    click.echo(f"wrote {exporter.output_dir}")


@main.command("convergence")
@click.argument("example", type=click.Choice(EXAMPLE_IDS))
@click.option("--nu1", type=float, default=0.5, show_default=True)
@click.option("--nu2-rule")
@click.option("--rho2", type=float, help="constant rho2 for ex1ext")
@click.option("--T", "T", type=float, help="final time for ex1ext")
@click.option("--axis", type=click.Choice([a.value for a in RefinementAxis]), default="time",
              show_default=True)
@click.option("--levels", type=click.IntRange(min=2), default=3, show_default=True,
              help="number of grids")
@grid_options
@click.option("--richardson", type=click.Choice(["on", "off"]), default="off", show_default=True)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path))
@handle_errors
def convergence_cmd(example, nu1, nu2_rule, rho2, T, axis, levels, K, Kx, Ky, J, richardson, out):
    """Halve one step size repeatedly and report empirical orders."""
    with setup_errors():
        case = _make_case(example, nu1, nu2_rule, rho2, T)
        base = _grid_for_case(case, K, Kx, Ky, J)

    started = time.perf_counter()
    rows = convergence_study(case, base, levels, axis, richardson == "on")
    seconds = time.perf_counter() - started

    table = Table(title=f"{case.label}: {axis} refinement", show_header=True)
    for column in ("grid", "step", "gimel", "order"):
        table.add_column(column)
    for row in rows:
        grid_text = " ".join(f"{k}={v}" for k, v in row.grid.items())
        order = "-" if np.isnan(row.order) else f"{row.order:.3f}"
        table.add_row(grid_text, f"{row.step:.4g}", f"{row.gimel:.4e}", order)
    console.print(table)

    exporter = ResultExporter(output_root(out) / f"convergence_{case.label}_{axis}")
    csv_path = exporter.write_convergence_csv(rows)
    exporter.write_manifest({
        "command": "convergence",
        "config_hash": canonical_hash({
            "case": case.label, "base": _grid_dict(base), "axis": axis, "levels": levels,
        }),
        "parameters": {
            "example": example, "nu1": case.nu1, "nu2": case.nu2, "axis": axis, "levels": levels,
        },
        "grid": _grid_dict(base),
        "flags": _flags(richardson=richardson),
        "timings": {"total_seconds": seconds},
        "outputs": [str(csv_path)],
    })
    click.echo(f"wrote {csv_path}")


@main.command("kernel-sign")
@click.option("--rho1", type=float, default=1.0, show_default=True)
@click.option("--rho2", type=float, default=1.0, show_default=True)
@click.option("--nu1", type=float)
@click.option("--nu2", type=float)
@click.option("--T", "T", type=float, default=1.0, show_default=True)
@click.option("--samples", type=click.IntRange(min=2), default=200, show_default=True)
@click.option("--preset", type=click.Choice([p.value for p in KernelPreset]),
              help="sign-changing preset")
@click.option("--x", "x", type=float, default=0.0, show_default=True,
              help="rho1 = 1 + x^2 for presets")
@click.option("--out", type=click.Path(file_okay=False, path_type=Path))
@handle_errors
def kernel_sign_cmd(rho1, rho2, nu1, nu2, T, samples, preset, x, out):
    """Sample N(t) = rho1 t^-nu1/G(1-nu1) - rho2 t^-nu2/G(1-nu2) and locate t*."""
    with setup_errors():
        if preset:
            spec = preset_spec(KernelPreset(preset), x)
            profiles = [kernel_profile(spec, horizon, samples) for horizon in PRESET_HORIZONS]
            stem = f"kernel_{preset}"
        else:
            if nu1 is None or nu2 is None:
                raise click.UsageError("--nu1 and --nu2 are required without --preset")
            spec = KernelSpec(rho1=rho1, rho2=rho2, nu1=nu1, nu2=nu2)
            profiles = [kernel_profile(spec, T, samples)]
            stem = "kernel"

    exporter = ResultExporter(output_root(out) / stem)
    outputs = []
    for profile in profiles:
        outputs.append(exporter.write_profile_csv(profile, f"profile_T={profile.T:g}.csv"))
        if profile.sign_change is not None:
            click.echo(f"T={profile.T:g}: N changes sign at t* = {profile.sign_change:.10g}")
        else:
            click.echo(f"T={profile.T:g}: no sign change in (0, {profile.T:g}]")
    exporter.write_manifest({
        "command": "kernel-sign",
        "config_hash": canonical_hash(dataclasses.asdict(spec)),
        "parameters": dict(dataclasses.asdict(spec), samples=samples,
                           horizons=[p.T for p in profiles]),
        "flags": _flags(preset=preset),
        "outputs": [str(p) for p in outputs],
    })


if __name__ == "__main__":
    main()

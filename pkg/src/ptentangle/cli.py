"""Command-line interface.

Exit codes: 0 success, 2 usage/config error, 3 validation error, 4 numerical
failure.
"""
from __future__ import annotations

import functools
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click
import numpy as np

from . import dynamics, io, metrics, scenarios
from .errors import ConfigError, NumericalFailureError, ValidationError
from .matrixcore import partial_trace

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3, 4

STATE_PRESETS = {
    "bell": dynamics.bell_phi_plus,
    "mixed": lambda: np.eye(4, dtype=complex) / 4,
    "is1": lambda: dynamics.damped_state(0.5),
    "is2": lambda: dynamics.damped_state(1.0),
    "is3": lambda: dynamics.damped_state(1.6),
}


def _exit_codes(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"config error: {exc}", err=True)
            sys.exit(EXIT_USAGE)
        except ValidationError as exc:
            click.echo(f"validation error: {exc}", err=True)
            sys.exit(EXIT_VALIDATION)
        except NumericalFailureError as exc:
            click.echo(f"numerical failure: {exc}", err=True)
            sys.exit(EXIT_NUMERICAL)
    return wrapper


def _override_options(fn):
    opts = [
        click.option("--alpha", type=float, help="Non-Hermiticity (radians)."),
        click.option("--s", "s", type=float, help="Energy scale of the PT Hamiltonian."),
        click.option("--epsilon", type=float, help="Symmetry-breaking sigma_z strength."),
        click.option("--gamma", type=float, help="Amplitude-damping rate."),
        click.option("--t-max", type=float, help="End of the time grid (natural units)."),
        click.option("--n-samples", type=int, help="Number of grid points."),
        click.option("--dt", type=float, help="RK4 step (natural units)."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


@click.group()
def cli():
    """Two-qubit dynamics under local PT-symmetric operations."""


@cli.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), required=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@_override_options
@click.option("--report", is_flag=True, help="Print the entanglement-increase report.")
@_exit_codes
def simulate(config_path, out_path, report, **overrides):
    """Run one configured scenario and write its metric series as CSV."""
    cfg = io.load_config(config_path, overrides)
    records = scenarios.run_scenario(cfg)
    io.write_series(out_path, records)
    click.echo(f"wrote {len(records)} rows to {out_path}")
    if report:
        _print_report(scenarios.entanglement_increase_report(cfg, records))


def _print_report(rep: scenarios.IncreaseReport) -> None:
    click.echo(f"c_initial: {rep.c_initial:.12g}")
    click.echo(f"c_max: {rep.c_max:.12g}")
    click.echo(f"t_at_max: {rep.t_at_max:.12g}")
    click.echo(f"increased: {str(rep.increased).lower()}")
    for name, spans in rep.crossings.items():
        text = ", ".join(f"({a:.6g}, {'end' if b is None else f'{b:.6g}'})" for a, b in spans)
        click.echo(f"{name}_above_bound: [{text}]")


@cli.command()
@click.argument("fig_id", type=click.Choice(["fig2", "fig4", "fig5"]))
@click.option("--out-dir", type=click.Path(file_okay=False), required=True)
@_override_options
@click.option("--jobs", type=int, default=None, help="Curves evaluated concurrently.")
@_exit_codes
def figure(fig_id, out_dir, jobs, **overrides):
    """Write one CSV per curve of a figure preset plus a parameter manifest."""
    kwargs = {k: v for k, v in overrides.items() if v is not None}
    cfgs = scenarios.figure_preset(fig_id, **kwargs)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with ThreadPoolExecutor(max_workers=jobs or len(cfgs)) as pool:
        results = list(pool.map(scenarios.run_scenario, cfgs))
    curves = []
    for cfg, records in zip(cfgs, results):
        name = f"{fig_id}_{cfg.label}.csv"
        io.write_series(out / name, records)
        curves.append({"file": name, **io.describe_config(cfg)})
    manifest = {"figure": fig_id, "curves": curves}
    io.atomic_write_text(out / f"{fig_id}_manifest.json", json.dumps(manifest, indent=2) + "\n")
    click.echo(f"wrote {len(cfgs)} curves to {out}")


def _verdict(value: float, bound: float) -> str:
    return "violated" if value > bound else "holds"


@cli.command(name="metrics")
@click.argument("target")
@click.option("--save-state", type=click.Path(dir_okay=False), help="Also write the state as a state file.")
@_exit_codes
def metrics_cmd(target, save_state):
    """Report entanglement metrics of a state file or preset (bell, mixed, is1, is2, is3)."""
    if target in STATE_PRESETS:
        rho, label = STATE_PRESETS[target](), target
    elif Path(target).is_file():
        rho, label = io.read_state(target)
    else:
        raise ConfigError(f"{target!r} is neither a state file nor a preset {sorted(STATE_PRESETS)}")
    c = metrics.concurrence(rho)
    b = metrics.bell_max(rho)
    s2 = metrics.steering_parameter(rho, 2)
    s3 = metrics.steering_parameter(rho, 3)
    click.echo(f"label: {label}")
    click.echo(f"concurrence: {c:.12g}")
    click.echo(f"bell_max: {b:.12g}  # CHSH bound 2 {_verdict(b, scenarios.CHSH_BOUND)}")
    click.echo(f"s2: {s2:.12g}  # steering bound 1 {_verdict(s2, scenarios.STEERING_BOUND)}")
    click.echo(f"s3: {s3:.12g}  # steering bound 1 {_verdict(s3, scenarios.STEERING_BOUND)}")
    click.echo(f"purity: {metrics.purity(rho):.12g}")
    for q in (1, 2):
        red = partial_trace(rho, 3 - q)
        entries = ", ".join(f"[{z.real:.12g}, {z.imag:.12g}]" for z in red.reshape(-1))
        click.echo(f"reduced_qubit{q}: [{entries}]")
    if save_state:
        io.write_state(save_state, rho, label)


def main():
    cli(prog_name="ptentangle")


if __name__ == "__main__":
    main()

"""Headless scenario runner: scripted experiments, comparisons, and
parameter sweeps over the same engine the gateway serves.

Exit codes: 0 ok, 2 validation/parse failure, 3 faulted run.
"""
from __future__ import annotations

import json
import sys
from dataclasses import replace
from pathlib import Path

import click

from .attack import AttackConfig
from .config import (ScenarioConfig, ValidationError, attack_from_dict,
                     from_json, to_json)
from .logio import export_csv, export_json, parse_json_log
from .metrics import ReferenceMismatch, compute_metrics
from .session import Session, SessionState

EXIT_VALIDATION = 2
EXIT_FAULTED = 3

SWEEP_AXES = ("freq", "spl", "trigger_rate")

SWEEP_COLUMNS = ("index", "axis_value", "seed", "velocity_rmse_vs_setpoint",
                 "max_velocity_est_error", "max_lateral_deviation",
                 "max_heading_error", "imu_wheel_discrepancy_rms", "jerk_rms",
                 "stopping_distance", "attack_success")


def _load_scenario(path: str, attack_path: str | None,
                   seed: int | None) -> ScenarioConfig:
    try:
        cfg = from_json(Path(path).read_text())
        if attack_path is not None:
            attack = attack_from_dict(json.loads(Path(attack_path).read_text()))
            cfg = replace(cfg, attack=attack)
        if seed is not None:
            cfg = replace(cfg, seed=seed)
        return cfg.require_valid()
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError([("file", str(exc))]) from exc


def _fail_validation(exc: ValidationError) -> None:
    for field, message in exc.violations:
        click.echo(f"invalid config: {field}: {message}", err=True)
    sys.exit(EXIT_VALIDATION)


@click.group()
def main():
    """Acoustic-injection attack simulator."""


@main.command("run")
@click.option("--scenario", required=True, type=click.Path(exists=True),
              help="scenario config JSON")
@click.option("--attack", "attack_path", type=click.Path(exists=True),
              help="attack config JSON overriding the scenario's attack")
@click.option("--out", required=True, type=click.Path(), help="output directory")
@click.option("--format", "formats", multiple=True,
              type=click.Choice(["csv", "json"]), default=("csv", "json"))
@click.option("--seed", type=int, default=None, help="seed override")
@click.option("--repeat", type=int, default=1, show_default=True)
def cmd_run(scenario, attack_path, out, formats, seed, repeat):
    """Run a scenario to completion and write log + metrics artifacts."""
    if repeat < 1:
        click.echo("repeat must be >= 1", err=True)
        sys.exit(EXIT_VALIDATION)
    try:
        cfg = _load_scenario(scenario, attack_path, seed)
    except ValidationError as exc:
        return _fail_validation(exc)

    out_dir = Path(out)
    exit_code = 0
    for i in range(repeat):
        target = out_dir if repeat == 1 else out_dir / f"run-{i + 1}"
        target.mkdir(parents=True, exist_ok=True)
        session = Session(i + 1, cfg)
        state = session.run()
        if "csv" in formats:
            (target / "log.csv").write_text(export_csv(session.log))
        if "json" in formats:
            (target / "log.json").write_text(export_json(session.log))
        if session.log.records:
            report = compute_metrics(session.log)
            (target / "metrics.json").write_text(
                json.dumps(report.to_dict(), indent=2) + "\n")
        click.echo(f"run {i + 1}/{repeat}: {state.value}, "
                   f"{len(session.log.records)} records -> {target}")
        if state == SessionState.FAULTED:
            click.echo(f"faulted at tick {session.log.faulted_tick}", err=True)
            exit_code = EXIT_FAULTED
    sys.exit(exit_code)


@main.command("compare")
@click.argument("benign_log", type=click.Path(exists=True))
@click.argument("attack_log", type=click.Path(exists=True))
def cmd_compare(benign_log, attack_log):
    """Compare an attack run against a benign reference run.

    Both arguments are JSON log exports sharing seed and config apart
    from the attack.
    """
    try:
        benign = parse_json_log(Path(benign_log).read_text())
        attacked = parse_json_log(Path(attack_log).read_text())
    except (OSError, ValueError, KeyError, TypeError) as exc:
        click.echo(f"cannot parse logs: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    try:
        report = compute_metrics(attacked, reference=benign)
        benign_report = compute_metrics(benign)
    except (ReferenceMismatch, ValueError) as exc:
        click.echo(f"logs not comparable: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)

    deltas = {}
    for key, value in report.to_dict().items():
        ref_value = benign_report.to_dict()[key]
        if isinstance(value, (int, float)) and isinstance(ref_value, (int, float)):
            deltas[key] = value - ref_value
    click.echo(json.dumps({
        "attack": report.to_dict(),
        "benign": benign_report.to_dict(),
        "deltas": deltas,
        "verdict": report.attack_success,
    }, indent=2))


def _apply_axis(attack: AttackConfig, axis: str, value: float) -> AttackConfig:
    if axis == "freq":
        return replace(attack, carrier_freq=value)
    if axis == "spl":
        return replace(attack, spl_at_source=value)
    return replace(attack, trigger_rate=value)


@main.command("sweep")
@click.option("--scenario", required=True, type=click.Path(exists=True))
@click.option("--attack", "attack_path", required=True,
              type=click.Path(exists=True), help="attack template JSON")
@click.option("--axis", required=True, type=click.Choice(SWEEP_AXES))
@click.option("--range", "axis_range", required=True,
              help="inclusive lo:hi range for the axis")
@click.option("--steps", required=True, type=int)
@click.option("--out", type=click.Path(), default="-",
              help="output CSV table ('-' for stdout)")
def cmd_sweep(scenario, attack_path, axis, axis_range, steps, out):
    """Run one session per grid point; emits a CSV of axis value vs
    metrics. Each point derives its seed as base seed + index."""
    if steps < 2:
        click.echo("steps must be >= 2", err=True)
        sys.exit(EXIT_VALIDATION)
    try:
        lo_text, _, hi_text = axis_range.partition(":")
        lo, hi = float(lo_text), float(hi_text)
    except ValueError:
        click.echo("range must be lo:hi", err=True)
        sys.exit(EXIT_VALIDATION)
    try:
        base = _load_scenario(scenario, attack_path, None)
    except ValidationError as exc:
        return _fail_validation(exc)

    grid = [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]
    sink = sys.stdout if out == "-" else open(out, "w")
    try:
        sink.write(",".join(SWEEP_COLUMNS) + "\n")
        sink.flush()
        for i, value in enumerate(grid):
            cfg = replace(base, seed=base.seed + i,
                          attack=_apply_axis(base.attack, axis, value))
            try:
                cfg = cfg.require_valid()
            except ValidationError as exc:
                click.echo(f"point {i} ({value}) invalid: {exc}", err=True)
                sys.exit(EXIT_VALIDATION)
            session = Session(i, cfg)
            state = session.run()
            if state == SessionState.FAULTED:
                click.echo(f"point {i} ({value}) faulted", err=True)
                sys.exit(EXIT_FAULTED)
            report = compute_metrics(session.log)
            row = report.to_dict()
            sink.write(",".join(str(v) for v in (
                i, value, cfg.seed,
                row["velocity_rmse_vs_setpoint"],
                row["max_velocity_est_error"],
                row["max_lateral_deviation"],
                row["max_heading_error"],
                row["imu_wheel_discrepancy_rms"],
                row["jerk_rms"],
                "" if row["stopping_distance"] is None else row["stopping_distance"],
                row["attack_success"])) + "\n")
            sink.flush()
    finally:
        if sink is not sys.stdout:
            sink.close()


@main.command("scenario")
@click.option("--kind", type=click.Choice(["cruise", "brake_test"]),
              default="cruise", show_default=True)
@click.option("--scale", type=click.Choice(["full", "rc"]), default="full",
              show_default=True, help="full-size car or desk-scale vehicle")
@click.option("--seed", type=int, default=42, show_default=True)
def cmd_scenario(kind, scale, seed):
    """Print a default scenario config JSON to adapt and rerun."""
    from .config import default_brake_test, default_cruise
    from .vehicle import RC_SCALE_VEHICLE

    if kind == "cruise":
        cfg = default_cruise(seed=seed, v_set_kmh=50.0 if scale == "full" else 7.2)
    else:
        cfg = default_brake_test(seed=seed, v0=20.0 if scale == "full" else 2.0)
    if scale == "rc":
        cfg = replace(cfg, vehicle=RC_SCALE_VEHICLE)
    click.echo(json.dumps(json.loads(to_json(cfg)), indent=2))


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=None,
              help="defaults to MEMSIM_PORT or 8377")
@click.option("--ui", type=click.Path(), default=None,
              help="directory of built dashboard assets")
@click.option("--scenario", "scenario_path", type=click.Path(exists=True),
              default=None, help="scenario config file to preload as a session")
def cmd_serve(host, port, ui, scenario_path):
    """Serve the HTTP gateway (loopback by default)."""
    import os

    import uvicorn

    from .gateway import create_app
    from .host import HostRegistry

    registry = HostRegistry()
    if scenario_path is not None:
        try:
            cfg = _load_scenario(scenario_path, None, None)
        except ValidationError as exc:
            return _fail_validation(exc)
        session = registry.create(cfg).session
        click.echo(f"preloaded session {session.id} from {scenario_path}", err=True)
    resolved = port if port is not None else int(os.environ.get("MEMSIM_PORT", "8377"))
    uvicorn.run(create_app(registry, ui_dir=ui), host=host, port=resolved,
                log_level="warning")


if __name__ == "__main__":
    main()

"""Command-line entry points: analyze, static-bench, synth, serve."""

from __future__ import annotations

import json
import os
import sys

import click

from . import serialize
from .analysis import analyze_samples, write_artifacts
from .area import DEFAULT_SECTOR_MM
from .events import EventLimits, default_limits
from .filters import FilterConfig
from .ingest import group_by_source, parse_log
from .kinematics import ChainConfig, chain_defaults
from .synthlab import (
    MovementScript,
    Phase,
    default_movement_script,
    gen_movement,
    gen_static,
    run_static_sweep,
    sweep_filter_configs,
)


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _load_config(path: str | None) -> tuple[ChainConfig, EventLimits]:
    if path is None:
        return chain_defaults(), default_limits()
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        chain = ChainConfig.from_dict(data.get("chain", {}))
        limits = EventLimits.from_dict(data.get("limits", {}))
    except FileNotFoundError:
        _fail(f"config file not found: {path}")
    except (ValueError, KeyError) as exc:
        _fail(f"invalid config {path}: {exc}")
    return chain, limits


@click.group()
def main() -> None:
    """Industrial-truck operation analysis from indoor-positioning logs."""


@main.command()
@click.argument("input_path", type=click.Path())
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="JSON file with chain/limits overrides.")
@click.option("--out", "out_dir", type=click.Path(), default="analysis-out", show_default=True)
@click.option("--format", "log_format", type=click.Choice(["auto", "csv", "jsonl"]),
              default="auto", show_default=True)
@click.option("--source", default=None, help="Source id to analyze when the log has several.")
@click.option("--sector", type=float, default=DEFAULT_SECTOR_MM, show_default=True,
              help="Heatmap sector edge length in mm.")
@click.option("--figures/--no-figures", default=True, show_default=True)
def analyze(input_path: str, config_path: str | None, out_dir: str, log_format: str,
            source: str | None, sector: float, figures: bool) -> None:
    """Run the full chain on a recorded log and write the report artifacts."""
    if not os.path.isfile(input_path):
        _fail(f"input file not found: {input_path}")
    if log_format == "auto":
        log_format = "jsonl" if input_path.endswith((".jsonl", ".ndjson")) else "csv"
    chain, limits = _load_config(config_path)
    try:
        samples = parse_log(open(input_path, "rb").read(), log_format)
        groups = group_by_source(samples)
        if source is not None:
            if source not in groups:
                _fail(f"source {source!r} not in log (has {sorted(groups)})")
            samples = groups[source]
        elif len(groups) > 1:
            _fail(f"log has multiple sources {sorted(groups)}; pick one with --source")
        bundle = analyze_samples(samples, chain, limits)
        written = write_artifacts(bundle, out_dir, sector=sector, figures=figures)
    except ValueError as exc:
        _fail(str(exc))
    for path in written:
        click.echo(path)


@main.command("static-bench")
@click.argument("spec_path", type=click.Path(), required=False)
@click.option("--out", "out_csv", type=click.Path(), default="static_sweep.csv", show_default=True)
@click.option("--figure", "figure_path", type=click.Path(), default=None,
              help="Also render the sweep as a PNG figure.")
@click.option("--seed", type=int, default=None, help="Overrides the spec's seed.")
def static_bench(spec_path: str | None, out_csv: str, figure_path: str | None,
                 seed: int | None) -> None:
    """Run the static degradation sweep described by a JSON spec file.

    Without a spec file the benchmark grid is {5,10,25,50,100} Hz x
    {0,20,100,180,200} mm with all three filter families.
    """
    spec = {
        "rates": [5, 10, 25, 50, 100],
        "scatters": [0, 20, 100, 180, 200],
        "duration": 60.0,
        "seed": 0,
    }
    if spec_path is not None:
        if not os.path.isfile(spec_path):
            _fail(f"spec file not found: {spec_path}")
        try:
            with open(spec_path, encoding="utf-8") as fh:
                spec.update(json.load(fh))
        except ValueError as exc:
            _fail(f"invalid sweep spec: {exc}")
    if seed is not None:
        spec["seed"] = seed
    try:
        filters = ([FilterConfig.from_dict(d) for d in spec["filters"]]
                   if "filters" in spec else sweep_filter_configs())
        rows = run_static_sweep(spec["rates"], spec["scatters"], filters,
                                seed=int(spec["seed"]), duration=float(spec["duration"]))
    except (ValueError, KeyError, TypeError) as exc:
        _fail(f"invalid sweep spec: {exc}")
    with open(out_csv, "w", encoding="utf-8", newline="") as fh:
        fh.write(serialize.sweep_to_csv(rows))
    click.echo(out_csv)
    if figure_path:
        from . import plots

        plots.render_sweep(rows, figure_path)
        click.echo(figure_path)


@main.group()
def synth() -> None:
    """Deterministic scenario generators."""


@synth.command("static")
@click.option("--duration", type=float, default=60.0, show_default=True)
@click.option("--rate", type=float, default=100.0, show_default=True)
@click.option("--noise", type=float, default=2.0, show_default=True,
              help="Sensor noise std (3-D displacement magnitude, mm).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default="static.csv", show_default=True)
def synth_static(duration: float, rate: float, noise: float, seed: int, out_path: str) -> None:
    """Generate a static (parked vehicle) log."""
    try:
        samples = gen_static(duration, rate, noise, seed)
    except ValueError as exc:
        _fail(str(exc))
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("t,x,y,z\n")
        for s in samples:
            fh.write(f"{s.t!r},{s.x!r},{s.y!r},{s.z!r}\n")
    click.echo(out_path)


@synth.command("movement")
@click.option("--rate", type=float, default=100.0, show_default=True)
@click.option("--noise", type=float, default=2.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--script", "script_path", type=click.Path(), default=None,
              help="JSON movement script; defaults to the built-in scenario.")
@click.option("--out", "out_path", type=click.Path(), default="movement.jsonl", show_default=True)
@click.option("--truth", "truth_path", type=click.Path(), default=None,
              help="Also write the ground-truth event stack as JSONL.")
def synth_movement(rate: float, noise: float, seed: int, script_path: str | None,
                   out_path: str, truth_path: str | None) -> None:
    """Generate a scripted movement log (and optionally its ground truth)."""
    script = default_movement_script()
    if script_path is not None:
        if not os.path.isfile(script_path):
            _fail(f"script file not found: {script_path}")
        try:
            with open(script_path, encoding="utf-8") as fh:
                data = json.load(fh)
            script = script_from_dict(data)
        except (ValueError, KeyError) as exc:
            _fail(f"invalid movement script: {exc}")
    try:
        samples, truth = gen_movement(script, rate, noise, seed)
    except ValueError as exc:
        _fail(str(exc))
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        for s in samples:
            rec = {"t": s.t, "x": s.x, "y": s.y, "z": s.z}
            if s.fork_z is not None:
                rec["fork_z"] = s.fork_z
            fh.write(serialize.dumps(rec) + "\n")
    click.echo(out_path)
    if truth_path:
        with open(truth_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(serialize.stack_to_jsonl(truth))
        click.echo(truth_path)


def script_from_dict(data: dict) -> MovementScript:
    """Movement-script JSON schema: see docs/formats.md."""
    from .events import EventType

    phases = tuple(
        Phase(
            label=EventType(p["label"]) if p.get("label") else None,
            duration=float(p["duration"]),
            accel=float(p.get("accel", 0.0)),
            heading=tuple(p["heading"]) if p.get("heading") else None,
            fork_rate=float(p.get("fork_rate", 0.0)),
        )
        for p in data["phases"]
    )
    return MovementScript(
        phases=phases,
        anchors={k: tuple(v) for k, v in data.get("anchors", {}).items()},
        start=tuple(data.get("start", (0.0, 0.0))),
        initial_fork_z=float(data.get("initial_fork_z", 0.0)),
    )


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-root", type=click.Path(), default="./truckmotion-data", show_default=True)
def serve(port: int, host: str, data_root: str) -> None:
    """Serve the HTTP API (and the web UI when built) over a data root."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(data_root), host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()

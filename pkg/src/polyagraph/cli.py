"""Command-line interface.

Subcommands: ``generate`` (one graph), ``exact`` (a draw-count distribution),
``experiment`` (a replicated Monte Carlo run), and ``repro`` (bundled
figure-reproduction experiments with frozen configurations).

Progress goes to standard error; data goes to files or standard output.
Exit codes: 0 success, 2 bad arguments or malformed inputs, 3 enumeration
cap exceeded, 4 I/O failure.
"""

from __future__ import annotations

import dataclasses
import functools
import importlib.resources
import json
import time
from pathlib import Path

import click
import numpy as np

from .configio import (
    birth_time_csv,
    config_echo,
    degree_distribution_csv,
    fmt_float,
    load_config,
    parse_config_text,
    write_outputs,
)
from .errors import (
    CapExceeded,
    ConfigError,
    InvalidColor,
    InsufficientData,
    ScheduleParseError,
    ScheduleRangeError,
)
from .exact import (
    brute_force_pmf,
    pmf_constant_delta,
    pmf_constant_delta_dp,
    pmf_general,
)
from .experiments import (
    ExperimentConfig,
    draw_count_histogram,
    run_monte_carlo,
)
from .graphs import generate as generate_graph
from .graphs import reconstruct_graph
from .schedules import Constant, parse_schedule
from .urn import DrawHistory

_USAGE_ERRORS = (ScheduleParseError, ScheduleRangeError, ConfigError, InvalidColor,
                 InsufficientData, ValueError)


def _handled(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except CapExceeded as exc:
            click.echo(f"error: {exc}", err=True)
            raise SystemExit(3) from exc
        except _USAGE_ERRORS as exc:
            click.echo(f"error: {exc}", err=True)
            raise SystemExit(2) from exc
        except OSError as exc:
            click.echo(f"error: {exc}", err=True)
            raise SystemExit(4) from exc

    return wrapper


@click.group()
def main():
    """Grow preferential-attachment graphs from an expanding-color urn."""


@main.command("generate")
@click.option("--t", type=int, default=None, help="Number of growth steps.")
@click.option("--schedule", "schedule_spec", default="const:1", show_default=True,
              help="Reinforcement schedule string.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, type=click.Path(file_okay=False, path_type=Path))
@click.option("--replay", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              default=None, help="File of forced draw colors (one per step) to "
                                 "rebuild a specific graph instead of sampling.")
@_handled
def cmd_generate(t, schedule_spec, seed, out, replay):
    """Write one graph as an edge list plus a vertex/degree/birth-time table."""
    schedule = parse_schedule(schedule_spec)
    started = time.perf_counter()
    if replay is not None:
        draws = np.array([int(tok) for tok in replay.read_text().split()], dtype=np.int64)
        if t is not None and t != len(draws):
            raise click.UsageError(f"--t {t} disagrees with {len(draws)} replay draws")
        history = DrawHistory(schedule=schedule, draws=draws)
        graph = reconstruct_graph(history)
    else:
        if t is None:
            raise click.UsageError("--t is required unless --replay is given")
        if t < 0:
            raise click.UsageError(f"--t must be >= 0, got {t}")
        _, graph = generate_graph(t, schedule, seed)
    out.mkdir(parents=True, exist_ok=True)
    (out / "edges.txt").write_text(graph.edge_list_text())
    degree_rows = "".join(f"{v},{d},{b}\n" for v, d, b in graph.degree_rows())
    (out / "degrees.csv").write_text("vertex,degree,birth_time\n" + degree_rows)
    elapsed = time.perf_counter() - started
    click.echo(
        f"wrote {graph.num_vertices} vertices, {len(graph.edges)} edges to {out} "
        f"({elapsed:.3f}s)",
        err=True,
    )


@main.command("exact")
@click.option("--j", type=int, required=True, help="Color / vertex index.")
@click.option("--t", type=int, required=True, help="Horizon.")
@click.option("--schedule", "schedule_spec", default="const:1", show_default=True)
@click.option("--method", type=click.Choice(["general", "constant", "dp", "oracle"]),
              default="general", show_default=True)
@click.option("--k", type=int, default=None,
              help="Emit only the row for this draw count.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Output CSV path (default: standard output).")
@_handled
def cmd_exact(j, t, schedule_spec, method, k, out):
    """Write the exact draw-count distribution of color j as k,prob CSV."""
    if not 1 <= j <= t:
        raise click.UsageError(f"need 1 <= j <= t, got j={j}, t={t}")
    schedule = parse_schedule(schedule_spec)
    if method in ("constant", "dp"):
        if not isinstance(schedule, Constant):
            raise click.UsageError(f"--method {method} requires a const: schedule")
        delta = float(schedule.delta)
        pmf = (pmf_constant_delta_dp(j, t, delta) if method == "dp"
               else pmf_constant_delta(j, t, delta))
    elif method == "oracle":
        pmf = brute_force_pmf(j, t, schedule)
    else:
        pmf = pmf_general(j, t, schedule)
    rows = list(pmf.csv_rows())
    if k is not None:
        rows = [(kk, p) for kk, p in rows if kk == k]
        if not rows:
            raise click.UsageError(f"k={k} outside the support 0..{t - j + 1}")
    text = "k,prob\n" + "".join(f"{kk},{fmt_float(p)}\n" for kk, p in rows)
    if out is None:
        click.echo(text, nl=False)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
        click.echo(f"wrote {out}", err=True)


def _merged_config(config_path, model, schedule_spec, t, replicates, seed, out):
    overrides = {
        "model": model,
        "schedule_spec": schedule_spec,
        "t": t,
        "replicates": replicates,
        "seed": seed,
        "out": str(out) if out is not None else None,
    }
    overrides = {key: value for key, value in overrides.items() if value is not None}
    if config_path is not None:
        base = load_config(config_path)
        fields = {
            "model": base.model,
            "t": base.t,
            "replicates": base.replicates,
            "seed": base.seed,
            "schedule_spec": base.schedule_spec,
            "outputs": base.outputs,
            "out": base.out,
        }
        fields.update(overrides)
        if fields["model"] == "ba" and "schedule_spec" not in overrides:
            fields["schedule_spec"] = None  # a configured schedule does not carry over
        return ExperimentConfig(**fields)
    missing = [name for name in ("model", "t", "replicates", "seed")
               if name not in overrides]
    if missing:
        raise click.UsageError(
            f"without --config, {', '.join('--' + m for m in missing)} are required"
        )
    return ExperimentConfig(
        model=overrides["model"],
        t=overrides["t"],
        replicates=overrides["replicates"],
        seed=overrides["seed"],
        schedule_spec=overrides.get("schedule_spec"),
        out=overrides.get("out"),
    )


@main.command("experiment")
@click.option("--config", "config_path",
              type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option("--model", type=click.Choice(["polya", "ba"]), default=None)
@click.option("--schedule", "schedule_spec", default=None)
@click.option("--t", type=int, default=None)
@click.option("--replicates", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=None)
@click.option("--threads", type=int, default=None,
              help="Worker cap for replicates (default: available cores).")
@_handled
def cmd_experiment(config_path, model, schedule_spec, t, replicates, seed, out, threads):
    """Run a replicated experiment from a config file and/or inline flags."""
    config = _merged_config(config_path, model, schedule_spec, t, replicates, seed, out)
    if config.out is None:
        raise click.UsageError("an output directory is required (--out or out= in the config)")
    started = time.perf_counter()
    result = run_monte_carlo(config, threads=threads)
    written = write_outputs(result, config.out)
    elapsed = time.perf_counter() - started
    click.echo(
        f"{config.model} t={config.t} R={config.replicates}: wrote "
        f"{', '.join(str(p) for p in written)} ({elapsed:.2f}s)",
        err=True,
    )


_REPRO_FIGURES = ("fig3", "degree-ln", "degree-f", "degree-g", "birthtime-all")
_BIRTHTIME_RUNS = (
    ("delta1", "polya-one.cfg"),
    ("ln", "degree-ln.cfg"),
    ("f", "degree-f.cfg"),
    ("g", "degree-g.cfg"),
    ("ba", "ba-baseline.cfg"),
)


def _repro_config(name: str, t, replicates) -> ExperimentConfig:
    text = (importlib.resources.files("polyagraph") / "repro" / name).read_text()
    config = parse_config_text(text, source=f"repro:{name}")
    overrides = {}
    if t is not None:
        overrides["t"] = t
    if replicates is not None:
        overrides["replicates"] = replicates
    return dataclasses.replace(config, **overrides) if overrides else config


@main.command("repro")
@click.argument("figure", type=click.Choice(_REPRO_FIGURES))
@click.option("--out", required=True, type=click.Path(file_okay=False, path_type=Path))
@click.option("--threads", type=int, default=None)
@click.option("--t", type=int, default=None,
              help="Override the frozen horizon (for smoke runs).")
@click.option("--replicates", type=int, default=None,
              help="Override the frozen replicate count (for smoke runs).")
@_handled
def cmd_repro(figure, out, threads, t, replicates):
    """Run a bundled figure-reproduction experiment and emit plot-ready CSVs."""
    out.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    if figure == "fig3":
        config = _repro_config("fig3.cfg", t, replicates)
        vertex = 2
        schedule = config.schedule()
        exact = pmf_constant_delta_dp(vertex, config.t, float(schedule.delta))
        hist = draw_count_histogram(vertex, config.t, schedule,
                                    config.replicates, config.seed)
        (out / "exact_pmf.csv").write_text(
            "k,prob\n" + "".join(f"{k},{fmt_float(p)}\n" for k, p in exact.csv_rows())
        )
        (out / "empirical_pmf.csv").write_text(
            "k,frequency\n"
            + "".join(
                f"{k},{fmt_float(c / config.replicates)}\n" for k, c in enumerate(hist)
            )
        )
        payload = {"config": config_echo(config), "vertex": vertex}
        (out / "summary.json").write_text(_json_text(payload))
    elif figure.startswith("degree-"):
        config = _repro_config(f"{figure}.cfg", t, replicates)
        baseline = _repro_config("ba-baseline.cfg", t, replicates)
        result = run_monte_carlo(config, threads=threads)
        ba_result = run_monte_carlo(baseline, threads=threads)
        (out / "degree_distribution_polya.csv").write_text(degree_distribution_csv(result))
        (out / "degree_distribution_ba.csv").write_text(degree_distribution_csv(ba_result))
        payload = {"polya": config_echo(config), "ba": config_echo(baseline)}
        (out / "summary.json").write_text(_json_text(payload))
    else:  # birthtime-all
        payload = {}
        for label, cfg_name in _BIRTHTIME_RUNS:
            config = _repro_config(cfg_name, t, replicates)
            result = run_monte_carlo(config, threads=threads)
            (out / f"birth_time_{label}.csv").write_text(birth_time_csv(result))
            payload[label] = config_echo(config)
            click.echo(f"repro {figure}: finished {label}", err=True)
        (out / "summary.json").write_text(_json_text(payload))
    elapsed = time.perf_counter() - started
    click.echo(f"repro {figure}: outputs in {out} ({elapsed:.2f}s)", err=True)


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


if __name__ == "__main__":
    main()

"""Command-line front end: verify, reward, select, convert, render, serve."""

from __future__ import annotations

import json
import math
import os
import sys
from pathlib import Path

import click

from . import grids, metrics, render, reward, schema, selection
from .config import EngineConfig, load_config
from .errors import PlanVerifyError

EXIT_OK = 0
EXIT_PLAN_FAILURES = 1
EXIT_USAGE = 2


def _load_engine(config_path: str | None, resolution, tau_adj, epsilon) -> EngineConfig:
    try:
        cfg = load_config(config_path)
    except (OSError, PlanVerifyError) as exc:
        raise click.exceptions.Exit(EXIT_USAGE) from exc
    return cfg.with_overrides(resolution=resolution, tau_adj=tau_adj, epsilon=epsilon)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        raise click.exceptions.Exit(EXIT_USAGE) from exc


def _candidate_files(directory: str) -> list[Path]:
    try:
        files = sorted(p for p in Path(directory).iterdir() if p.is_file())
    except OSError as exc:
        click.echo(f"error: cannot read directory {directory}: {exc}", err=True)
        raise click.exceptions.Exit(EXIT_USAGE) from exc
    return files


def _mean_std(values: list[float]) -> dict:
    if not values:
        return {"mean": None, "std": None}
    mean = sum(values) / len(values)
    std = math.sqrt(sum((v - mean) ** 2 for v in values) / len(values))
    return {"mean": mean, "std": std}


AGGREGATE_FIELDS = (
    "room_area_mape",
    "room_id_accuracy",
    "overlap_flag",
    "percent_overlap",
    "compatibility",
    "total_area_error",
)


def aggregate_reports(reports: list[metrics.MetricReport]) -> dict:
    valid = [r for r in reports if r.valid_json]
    out: dict = {"plans": len(reports), "valid": len(valid)}
    for name in AGGREGATE_FIELDS:
        values = [float(getattr(r, name)) for r in valid]
        out[name] = _mean_std(values)
    return out


@click.group()
def main() -> None:
    """Floor plan verification, rewards, and selection."""


@main.command("verify")
@click.option("--spec", "spec_path", required=True, help="Design specification JSON file.")
@click.option("--plan", "plan_path", default=None, help="Single plan JSON file.")
@click.option("--dir", "plan_dir", default=None, help="Directory of plan JSON files.")
@click.option("--config", "config_path", default=None)
@click.option("--resolution", type=float, default=None)
@click.option("--tau-adj", type=float, default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json")
def cmd_verify(spec_path, plan_path, plan_dir, config_path, resolution, tau_adj, fmt):
    """Evaluate metrics for one plan or a batch of plans."""
    if (plan_path is None) == (plan_dir is None):
        click.echo("error: provide exactly one of --plan or --dir", err=True)
        raise click.exceptions.Exit(EXIT_USAGE)
    engine = _load_engine(config_path, resolution, tau_adj, None)
    try:
        spec = schema.parse_spec(_read(spec_path))
    except PlanVerifyError as exc:
        click.echo(f"error: bad spec: {exc}", err=True)
        raise click.exceptions.Exit(EXIT_USAGE)

    paths = [Path(plan_path)] if plan_path else _candidate_files(plan_dir)
    reports = []
    for path in paths:
        report = metrics.evaluate(
            spec, _read(str(path)), engine.adjacency, engine.resolution
        )
        reports.append(report)
        if fmt == "json":
            click.echo(json.dumps({"plan": path.name, **report.to_json()}))

    agg = aggregate_reports(reports)
    if fmt == "json":
        click.echo(json.dumps({"aggregate": agg}))
    else:
        click.echo(f"{'metric':<18}{'mean':>12}{'std':>12}")
        for name in AGGREGATE_FIELDS:
            entry = agg[name]
            mean = "-" if entry["mean"] is None else f"{entry['mean']:.4f}"
            std = "-" if entry["std"] is None else f"{entry['std']:.4f}"
            click.echo(f"{name:<18}{mean:>12}{std:>12}")
        click.echo(f"valid {agg['valid']}/{agg['plans']}")
    if any(not r.valid_json for r in reports):
        raise click.exceptions.Exit(EXIT_PLAN_FAILURES)


@main.command("reward")
@click.option("--spec", "spec_path", required=True)
@click.option("--plan", "plan_path", default=None, help="Single candidate file.")
@click.option("--dir", "candidate_dir", default=None, help="Directory of candidate files.")
@click.option("--group/--no-group", default=False, help="Also emit group-relative advantages.")
@click.option("--config", "config_path", default=None)
@click.option("--resolution", type=float, default=None)
@click.option("--tau-adj", type=float, default=None)
@click.option("--epsilon", type=float, default=None)
def cmd_reward(spec_path, plan_path, candidate_dir, group, config_path, resolution, tau_adj, epsilon):
    """Compute gated rewards (and optionally group advantages) for candidates."""
    if (plan_path is None) == (candidate_dir is None):
        click.echo("error: provide exactly one of --plan or --dir", err=True)
        raise click.exceptions.Exit(EXIT_USAGE)
    engine = _load_engine(config_path, resolution, tau_adj, epsilon)
    try:
        spec = schema.parse_spec(_read(spec_path))
    except PlanVerifyError as exc:
        click.echo(f"error: bad spec: {exc}", err=True)
        raise click.exceptions.Exit(EXIT_USAGE)
    reward_cfg = engine.reward_config()

    paths = [Path(plan_path)] if plan_path else _candidate_files(candidate_dir)
    if not paths:
        click.echo("error: no candidate files", err=True)
        raise click.exceptions.Exit(EXIT_USAGE)
    breakdowns = []
    for path in paths:
        b = reward.candidate_reward(spec, _read(str(path)), reward_cfg)
        breakdowns.append(b)
        click.echo(json.dumps({"candidate": path.name, **b.to_json()}))
    if group:
        grp = reward.group_advantages([b.reward for b in breakdowns], reward_cfg.epsilon)
        click.echo(json.dumps({"group": grp.to_json()}))


@main.command("select")
@click.option("--spec", "spec_path", required=True)
@click.option("--dir", "candidate_dir", required=True)
@click.option("--sweep", default=None, help="Comma-separated budgets, e.g. 1,10,100.")
@click.option("--config", "config_path", default=None)
@click.option("--resolution", type=float, default=None)
@click.option("--tau-adj", type=float, default=None)
def cmd_select(spec_path, candidate_dir, sweep, config_path, resolution, tau_adj):
    """Best-of-n selection over a directory of candidates."""
    engine = _load_engine(config_path, resolution, tau_adj, None)
    try:
        spec = schema.parse_spec(_read(spec_path))
    except PlanVerifyError as exc:
        click.echo(f"error: bad spec: {exc}", err=True)
        raise click.exceptions.Exit(EXIT_USAGE)
    paths = _candidate_files(candidate_dir)
    if not paths:
        click.echo("error: empty candidate directory", err=True)
        raise click.exceptions.Exit(EXIT_USAGE)
    texts = [_read(str(p)) for p in paths]

    result = selection.best_of(spec, texts, engine.adjacency, engine.resolution)
    if sweep:
        budgets = sorted({int(tok) for tok in sweep.split(",") if tok.strip()})
        rows = []
        for n in budgets:
            prefix = texts[: max(1, min(n, len(texts)))]
            res = selection.best_of(spec, prefix, engine.adjacency, engine.resolution)
            key = res.keys[res.selected_index]
            rows.append(
                {
                    "budget": n,
                    "selected_index": res.selected_index,
                    "overlap_area": key[0],
                    "compatibility": key[1],
                }
            )
        click.echo(json.dumps({"sweep": rows}))
    else:
        click.echo(json.dumps(result.to_json()))


@main.command("convert")
@click.argument("grid_path")
@click.argument("out_spec")
@click.argument("out_plan")
def cmd_convert(grid_path, out_spec, out_plan):
    """Convert a label-grid file into a spec and plan JSON pair."""
    try:
        grid = grids.parse_grid(_read(grid_path))
        plan, spec, _ = grids.grid_to_plan(grid)
        Path(out_spec).write_text(schema.serialize_spec(spec), encoding="utf-8")
        Path(out_plan).write_text(schema.serialize_plan(plan), encoding="utf-8")
    except (OSError, PlanVerifyError) as exc:
        click.echo(f"error: {exc}", err=True)
        raise click.exceptions.Exit(EXIT_USAGE)


@main.command("render")
@click.option("--plan", "plan_path", required=True)
@click.option("--out", "out_path", required=True)
@click.option("--config", "config_path", default=None)
def cmd_render(plan_path, out_path, config_path):
    """Render a plan to SVG."""
    engine = _load_engine(config_path, None, None, None)
    try:
        plan = schema.parse_plan(_read(plan_path))
        svg = render.render_svg(plan, engine.theme())
        Path(out_path).write_text(svg, encoding="utf-8")
    except (OSError, PlanVerifyError) as exc:
        click.echo(f"error: {exc}", err=True)
        raise click.exceptions.Exit(EXIT_USAGE)


@main.command("serve")
@click.option("--port", type=int, default=8080)
@click.option("--host", default="127.0.0.1")
@click.option("--config", "config_path", default=None)
def cmd_serve(port, host, config_path):
    """Run the HTTP scoring service."""
    import uvicorn

    from .service import create_app

    engine = _load_engine(config_path, None, None, None)
    uvicorn.run(create_app(engine), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()

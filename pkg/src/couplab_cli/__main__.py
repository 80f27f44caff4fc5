import json
import math
from pathlib import Path
from typing import NoReturn

import typer

from couplab.bench.config import SweepConfig, format_grid_value, load_config, parse_grid_value
from couplab.bench.heatmap import METRICS, emit_heatmap
from couplab.bench.metrics import SweepMetrics
from couplab.bench.optima import find_optima
from couplab.bench.reference import REFERENCE_CASES, identity_violations, reference_rows
from couplab.bench.results import SweepResultRow, read_csv, write_csv, write_steps_csv
from couplab.bench.sweep import run_case, run_sweep_cases
from couplab.config import configure_logging, settings
from couplab.errors import CouplabError
from couplab.policy.budgets import BudgetPolicy, FixedPerCall, parse_policy

app = typer.Typer(add_completion=False, help="Partitioned coupling laboratory")

EXIT_CONFIG = 1
EXIT_NOT_CONVERGED = 2


def fail(message: str, code: int = EXIT_CONFIG) -> NoReturn:
    typer.echo(f"Error: {message}", err=True)
    raise typer.Exit(code=code)


def load_or_exit(path: Path) -> SweepConfig:
    try:
        return load_config(path)
    except CouplabError as exc:
        fail(str(exc))


def row_summary(row: SweepResultRow) -> dict:
    return {
        "cell": row.label,
        "n_f": format_grid_value(row.n_f) or None,
        "n_s": format_grid_value(row.n_s) or None,
        "policy": row.policy or None,
        "coupling_iters": row.coupling_iters,
        "newton_f": row.newton_f,
        "newton_s": row.newton_s,
        "newton_total": row.newton_total,
        "cost": row.cost,
        "converged": row.converged,
    }


@app.callback()
def main_callback(
    log_level: str = typer.Option(settings.log_level, "--log-level", help="Log level"),
    log_format: str = typer.Option(settings.log_format, "--log-format", help="console or json"),
):
    configure_logging(log_level, log_format)


@app.command()
def run(
    config: Path = typer.Option(..., "--config", help="Sweep config (JSON)"),
    n_a: str = typer.Option(None, "--n-a", help="Newton budget of A per call (int or inf)"),
    n_b: str = typer.Option(None, "--n-b", help="Newton budget of B per call (int or inf)"),
    policy: str = typer.Option(None, "--policy", help="Adaptive policy, e.g. N1-CC or CID"),
    out: Path = typer.Option(None, "--out", help="Per-step CSV"),
):
    """Run one case and print its totals as JSON"""
    cfg = load_or_exit(config)
    chosen: BudgetPolicy
    try:
        if policy:
            if n_a or n_b:
                fail("--policy cannot be combined with --n-a/--n-b")
            chosen = parse_policy(policy, cfg.build_tolerances())
        else:
            chosen = FixedPerCall(
                parse_grid_value(n_a) if n_a else math.inf,
                parse_grid_value(n_b) if n_b else math.inf,
            )
    except (CouplabError, ValueError) as exc:
        fail(str(exc))

    case = run_case(cfg, chosen, timing=cfg.output.timing)
    if out:
        write_steps_csv([(case.key, case.ledger)], out)
    summary = row_summary(case.row)
    summary["error"] = case.error
    typer.echo(json.dumps(summary, indent=2))
    if not case.row.converged:
        raise typer.Exit(code=EXIT_NOT_CONVERGED)


@app.command()
def sweep(
    config: Path = typer.Option(..., "--config", help="Sweep config (JSON)"),
    out: Path = typer.Option(None, "--out", help="Result CSV (overrides output.csv)"),
    steps_out: Path = typer.Option(None, "--steps-out", help="Per-step CSV"),
    heatmap_dir: Path = typer.Option(None, "--heatmap-dir", help="Directory for SVG heatmaps"),
    metrics: Path = typer.Option(None, "--metrics", help="Prometheus text file"),
    workers: int = typer.Option(None, "--workers", min=1, help="Concurrent cells"),
    timing: bool = typer.Option(None, "--timing/--no-timing", help="Record wall_s"),
):
    """Run the budget grid and the adaptive policies"""
    cfg = load_or_exit(config)
    out = out or (Path(cfg.output.csv) if cfg.output.csv else None)
    steps_out = steps_out or (Path(cfg.output.steps_csv) if cfg.output.steps_csv else None)
    heatmap_dir = heatmap_dir or (Path(cfg.output.heatmap_dir) if cfg.output.heatmap_dir else None)
    metrics = metrics or (Path(cfg.output.metrics) if cfg.output.metrics else None)

    sweep_metrics = SweepMetrics() if metrics else None
    cases = run_sweep_cases(cfg, workers=workers, timing=timing, metrics=sweep_metrics)
    rows = [c.row for c in cases]

    if out:
        write_csv(rows, out)
    if steps_out:
        write_steps_csv([(c.key, c.ledger) for c in cases], steps_out)
    if heatmap_dir:
        heatmap_dir.mkdir(parents=True, exist_ok=True)
        for metric in METRICS:
            emit_heatmap(rows, metric, heatmap_dir / f"{cfg.name}-{metric}.svg")
    if sweep_metrics and metrics:
        sweep_metrics.write(metrics)

    failed = [r.label for r in rows if not r.converged]
    typer.echo(
        json.dumps({"cells": len(rows), "failed": failed, "optima": find_optima(rows).model_dump()}, indent=2)
    )
    if failed:
        raise typer.Exit(code=EXIT_NOT_CONVERGED)


@app.command()
def optima(csv: Path = typer.Option(..., "--csv", help="Result CSV")):
    """Summarize an existing result CSV"""
    try:
        rows = read_csv(csv)
    except CouplabError as exc:
        fail(str(exc))
    if not rows:
        fail(f"{csv} has no rows")
    summary = find_optima(rows).model_dump()
    summary["identity_violations"] = identity_violations(rows)
    typer.echo(json.dumps(summary, indent=2))


@app.command()
def heatmap(
    csv: Path = typer.Option(..., "--csv", help="Result CSV"),
    metric: str = typer.Option("newton", "--metric", help="coupling, newton or cost"),
    out: Path = typer.Option(..., "--out", help="SVG output"),
):
    """Render a fixed-budget grid as an SVG heatmap"""
    if metric not in METRICS:
        fail(f"Unknown metric {metric!r}; expected one of {', '.join(METRICS)}")
    try:
        emit_heatmap(read_csv(csv), metric, out)
    except CouplabError as exc:
        fail(str(exc))
    typer.echo(str(out))


@app.command()
def reference(
    case: str = typer.Argument(..., help="strong or weak"),
    out: Path = typer.Option(..., "--out", help="Result CSV"),
):
    """Write the published benchmark counts as a result CSV"""
    if case not in REFERENCE_CASES:
        fail(f"Unknown reference case {case!r}; expected one of {', '.join(REFERENCE_CASES)}")
    rows = reference_rows(case)
    write_csv(rows, out)
    typer.echo(json.dumps({"rows": len(rows), "identity_violations": identity_violations(rows)}, indent=2))


def main() -> None:
    app()


if __name__ == "__main__":
    main()

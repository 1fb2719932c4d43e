"""Command-line interface for pinsync.

Provides the main entry point and subcommands for checking the spectral
synchronization condition, selecting pinning nodes, simulating the
event-triggered closed loop and evaluating its inter-event bounds.
"""

import logging
import math
from pathlib import Path
from typing import Annotated, Optional

import typer
from rich.console import Console
from rich.markup import escape
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from pinsync.bounds import bound_report, zeno_diagnostics
from pinsync.config import RunConfig, load_config, realize
from pinsync.dynamics import verify_one_sided_bound
from pinsync.errors import ConfigError, ConfigIssue, PinsyncError
from pinsync.models import ConditionReport
from pinsync.reporters import (
    BoundsReporter,
    ConditionReporter,
    EventsReporter,
    KeyValueReporter,
    MarkdownReporter,
    SelectionReporter,
    TraceReporter,
    assumption_summary,
    bound_summary,
    run_summary,
)
from pinsync.reporters.csv import read_events, read_key_values, read_trace
from pinsync.simulator import simulate as run_simulation
from pinsync.spectral import check_sync_condition, select_pinned_nodes

app = typer.Typer(
    name="pinsync",
    help="Event-triggered pinning impulsive synchronization of dynamical networks.",
    no_args_is_help=True,
)

console = Console()
err_console = Console(stderr=True)

# Configure logging
logging.basicConfig(
    level=logging.WARNING,
    format="%(levelname)s: %(message)s",
)
logger = logging.getLogger("pinsync")

ConfigOption = Annotated[
    Path,
    typer.Option(
        "--config",
        "-c",
        help="Run configuration (.json or .toml)",
        exists=True,
        readable=True,
        dir_okay=False,
    ),
]
OutOption = Annotated[
    Optional[Path],
    typer.Option("--out", "-o", help="Output directory (overrides the config)"),
]
SeedOption = Annotated[
    Optional[int],
    typer.Option(
        "--seed", help="Seed for the random draws (overrides the config)", min=0
    ),
]
VerboseOption = Annotated[
    bool,
    typer.Option("--verbose", "-v", help="Enable verbose output"),
]


def _setup_logging(verbose: bool) -> None:
    """Configure logging level based on verbosity flag."""
    level = logging.DEBUG if verbose else logging.WARNING
    logging.getLogger("pinsync").setLevel(level)


def _fail(error: Exception) -> typer.Exit:
    """Print an error and return the exit for status 1."""
    if isinstance(error, ConfigError):
        err_console.print("[red]Error:[/red] invalid configuration")
        for issue in error.issues:
            err_console.print(f"  - {escape(str(issue))}")
    else:
        err_console.print(f"[red]Error:[/red] {escape(str(error))}")
    return typer.Exit(code=1)


def _out_dir(run: RunConfig, out: Optional[Path]) -> Path:
    return out if out is not None else run.output


def _num(value: float) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.6g}"


def _condition_table(title: str, reports: list[ConditionReport]) -> Table:
    table = Table(title=title)
    table.add_column("l", justify="right")
    table.add_column("Pinned nodes")
    table.add_column("lambda_max(A_bar)", justify="right")
    table.add_column("min coupling", justify="right")
    table.add_column("Satisfied")
    for r in reports:
        table.add_row(
            str(r.pins.l),
            r.pins.label() or "-",
            _num(r.lambda_max_abar),
            _num(r.min_coupling),
            "[green]yes[/green]" if r.satisfied else "[red]no[/red]",
        )
    return table


@app.command()
def check(
    config: ConfigOption,
    out: OutOption = None,
    verbose: VerboseOption = False,
) -> None:
    """Check the spectral synchronization condition for the configured pins.

    Exit codes:
        0 - Condition satisfied
        2 - Condition not satisfied
        1 - Error occurred (invalid configuration, spectral failure, etc.)
    """
    _setup_logging(verbose)
    try:
        run = load_config(config)
        spec = run.network
        c = run.condition_c()
        report = check_sync_condition(spec.gamma, c, spec.topology, run.pins)
        out_dir = _out_dir(run, out)
        ConditionReporter().write([report], out_dir / ConditionReporter.filename)
    except (PinsyncError, OSError, ValueError) as e:
        raise _fail(e) from None

    title = f"gamma={spec.gamma:g}, c={c:g}"
    console.print(_condition_table(title, [report]))
    if report.all_pinned:
        console.print("[dim]Every node is pinned; no topology requirement.[/dim]")
    if report.satisfied:
        console.print("[green]Synchronization condition satisfied[/green]")
        raise typer.Exit(code=0)
    console.print("[yellow]Synchronization condition not satisfied[/yellow]")
    raise typer.Exit(code=2)


@app.command()
def select(
    config: ConfigOption,
    out: OutOption = None,
    markdown: Annotated[
        Optional[Path],
        typer.Option("--markdown", help="Also write the trail as a Markdown table"),
    ] = None,
    template: Annotated[
        Optional[Path],
        typer.Option(
            "--template",
            "-t",
            help="Custom Jinja2 template for --markdown",
            exists=True,
            readable=True,
        ),
    ] = None,
    verbose: VerboseOption = False,
) -> None:
    """Select pinning nodes greedily until the condition holds.

    Nodes whose degree is at most gamma/c are pinned first, then the
    remaining node of largest degree is added until the condition holds.
    """
    _setup_logging(verbose)
    try:
        run = load_config(config)
        spec = run.network
        c = run.condition_c()
        pins, trail = select_pinned_nodes(spec.topology, spec.gamma, c)
        out_dir = _out_dir(run, out)
        SelectionReporter().write(trail, out_dir / SelectionReporter.filename)
        if markdown is not None:
            MarkdownReporter(template_path=template).write(trail, markdown)
    except (PinsyncError, OSError, ValueError) as e:
        raise _fail(e) from None

    console.print(_condition_table("Selection trail", trail))
    if trail[-1].all_pinned and len(trail) == 1:
        console.print("[dim]Every node is mandatory; all nodes are pinned.[/dim]")
    console.print(f"Pinned nodes: [bold]{pins.label() or '-'}[/bold]")
    if markdown is not None:
        console.print(f"[green]Generated:[/green] {markdown}")


@app.command()
def simulate(
    config: ConfigOption,
    out: OutOption = None,
    seed: SeedOption = None,
    verbose: VerboseOption = False,
) -> None:
    """Simulate the closed loop and write trace, events and summary CSVs."""
    _setup_logging(verbose)
    try:
        run = load_config(config)
        used_seed = run.initial.seed if seed is None else seed
        sim = realize(run, used_seed)
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=console,
            transient=True,
        ) as progress:
            task = progress.add_task("Simulating...", total=None)
            trace, log = run_simulation(sim)
            progress.update(task, completed=True)
        zeno = zeno_diagnostics(log, (sim.t0, sim.t_end), nodes=sim.pins)

        out_dir = _out_dir(run, out)
        TraceReporter().write(trace, out_dir / TraceReporter.filename)
        EventsReporter().write(log, out_dir / EventsReporter.filename)
        KeyValueReporter("summary.csv").write(
            run_summary(sim, used_seed, trace, log, zeno), out_dir / "summary.csv"
        )
    except (PinsyncError, OSError, ValueError) as e:
        raise _fail(e) from None

    table = Table(title="Events per pinned node")
    table.add_column("Node", justify="right")
    table.add_column("Events", justify="right")
    table.add_column("Min gap", justify="right")
    table.add_column("Mean gap", justify="right")
    for node, stats in zeno.per_node.items():
        table.add_row(
            str(node),
            str(stats.count),
            "-" if stats.min_gap is None else f"{stats.min_gap:.6g}",
            "-" if stats.mean_gap is None else f"{stats.mean_gap:.6g}",
        )
    console.print(table)
    console.print(
        f"V: {trace.v_total[0]:.6g} -> {trace.v_total[-1]:.6g}, "
        f"final c = {trace.c[-1]:.6g}"
    )
    console.print(f"[green]Written:[/green] {out_dir}")


@app.command()
def bounds(
    config: ConfigOption,
    out: OutOption = None,
    seed: SeedOption = None,
    verbose: VerboseOption = False,
) -> None:
    """Evaluate the inter-event lower bounds against a completed run.

    Reads ``trace.csv``, ``events.csv`` and ``summary.csv`` from the output
    directory of a previous ``simulate`` with the same configuration.
    """
    _setup_logging(verbose)
    try:
        run = load_config(config)
        out_dir = _out_dir(run, out)
        summary = read_key_values(out_dir / "summary.csv")
        if seed is None:
            seed = int(summary["seed"]) if summary.get("seed") else run.initial.seed
        sim = realize(run, seed)
        trace = read_trace(
            out_dir / TraceReporter.filename, sim.spec.n_nodes, sim.spec.dim
        )
        log = read_events(out_dir / EventsReporter.filename)
        report = bound_report(sim, trace, log, run.epsilon, run.mu)
        BoundsReporter().write(report, out_dir / BoundsReporter.filename)
        KeyValueReporter("bounds_summary.csv").write(
            bound_summary(report), out_dir / "bounds_summary.csv"
        )
    except (PinsyncError, OSError, ValueError) as e:
        raise _fail(e) from None

    console.print(f"theta = {report.params.theta:.6g}, M = {report.params.m:.6g}")
    for node in report.isolated:
        console.print(f"[yellow]Pinned node {node} is isolated; no bound[/yellow]")
    violations = report.violations
    if violations:
        console.print(f"[red]{len(violations)} gap(s) below the lower bound[/red]")
    else:
        console.print(
            f"[green]All {len(report.events)} event gap(s) respect the bound[/green]"
        )


@app.command("verify-assumption")
def verify_assumption(
    config: ConfigOption,
    out: OutOption = None,
    seed: SeedOption = None,
    verbose: VerboseOption = False,
) -> None:
    """Sample the one-sided growth condition of the node dynamics on a box."""
    _setup_logging(verbose)
    try:
        run = load_config(config)
        if run.box is None:
            raise ConfigError(
                [ConfigIssue("MissingField", "assumption.box", "required field")]
            )
        spec = run.network
        report = verify_one_sided_bound(
            spec.dynamics,
            spec.inner,
            run.box,
            run.samples,
            run.assumption_seed if seed is None else seed,
        )
        out_dir = _out_dir(run, out)
        KeyValueReporter("assumption.csv").write(
            assumption_summary(report), out_dir / "assumption.csv"
        )
    except (PinsyncError, OSError, ValueError) as e:
        raise _fail(e) from None

    console.print(
        f"gamma = {report.gamma:g}, empirical = {report.gamma_hat:.6g}, "
        f"violations = {report.violation_count}/{report.n_samples}"
    )
    if report.violation_count:
        console.print("[yellow]The bound does not hold on the whole box[/yellow]")
    else:
        console.print("[green]No violations found[/green]")


if __name__ == "__main__":
    app()

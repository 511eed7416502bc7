# cli.py - Command line: verify suites, inspect nets, build kernels, export plot data

import json
from pathlib import Path
from typing import Annotated, Optional

import typer
from rich import box
from rich.console import Console
from rich.table import Table

from asymptotics import Classification, estimate_net
from config import load_config
from corpus import parse_net
from errors import ColombeauError, ConfigError, UnknownCheck
from mollifier import check_moments, export_table, load_table
from utils import Timer, dump_json, status, write_atomic
from verify import CheckContext, registry, run_suite, series_frame, suite_document

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2

app = typer.Typer(
    name="colombeau-lab",
    help="Numerical checks of duality statements for Colombeau generalized functions",
    add_completion=False,
    rich_markup_mode="rich",
)
mollifier_app = typer.Typer(help="Build, certify and export the vanishing-moment kernel", add_completion=False)
app.add_typer(mollifier_app, name="mollifier")

out_console = Console(highlight=False)

ConfigOption = Annotated[Optional[Path], typer.Option("--config", "-c", help="JSON config file (falls back to "
                                                                           "COLOMBEAU_CONFIG)")]


def _load(config, overrides=None):
    try:
        return load_config(str(config) if config else None, overrides)
    except ConfigError as e:
        status("fail", str(e))
        raise typer.Exit(EXIT_CONFIG)


def _outcome(report):
    if report.error is not None:
        return "[red]error[/red]"
    if report.skipped is not None:
        return "[yellow]skipped[/yellow]"
    return "[green]pass[/green]" if report.passed else "[red]FAIL[/red]"


def _summary_line(report):
    if report.error is not None:
        return report.error
    if report.skipped is not None:
        return report.skipped
    failing = [f for f in report.findings if not f.passed]
    shown = failing[0] if failing else (report.findings[0] if report.findings else None)
    if shown is None:
        return ""
    measured = shown.measured
    text = measured.label() if hasattr(measured, "label") and callable(measured.label) else str(measured)
    return f"{shown.name}: {text}"


def render_reports(reports):
    table = Table(title="Check results", box=box.ROUNDED, header_style="bold magenta")
    table.add_column("Check", style="cyan", no_wrap=True)
    table.add_column("Result")
    table.add_column("Findings", justify="right")
    table.add_column("First failing (or first) finding", style="dim white")
    for r in reports:
        passed = sum(1 for f in r.findings if f.passed)
        table.add_row(r.check_id, _outcome(r), f"{passed}/{len(r.findings)}", _summary_line(r))
    out_console.print(table)


@app.command()
def verify(
    suite: Annotated[str, typer.Option("--suite", "-s", help="'all' or comma-separated check ids / globs")] = "all",
    config: ConfigOption = None,
    out: Annotated[Optional[Path], typer.Option("--out", "-o", help="Report path (default: output.path)")] = None,
    eps_kmax: Annotated[Optional[int], typer.Option("--eps-kmax", help="Finest grid level k (eps = base^-k)")] = None,
    qmax: Annotated[Optional[float], typer.Option("--qmax", help="Order treated as negligible")] = None,
    jobs: Annotated[Optional[int], typer.Option("--jobs", "-j", help="Checks run in parallel")] = None,
):
    """Run a check suite and write the JSON report."""
    cfg = _load(config, {("eps_grid", "k_max"): eps_kmax, ("valuation", "q_max"): qmax, "jobs": jobs})
    ctx = CheckContext.from_config(cfg)

    status("start", f"Running suite '{suite}' on {len(ctx.grid)} grid points")
    try:
        with Timer("Suite", verbose=True):
            reports = run_suite(suite, context=ctx, jobs=ctx.lab.jobs)
    except UnknownCheck as e:
        status("fail", str(e.args[0]) if e.args else str(e))
        raise typer.Exit(EXIT_CONFIG)

    render_reports(reports)
    document = suite_document(reports, ctx)
    path = str(out) if out else ctx.lab.output_path
    write_atomic(path, dump_json(document))
    status("file", f"Report written to {path}")

    summary = document["summary"]
    status("total", f"{summary['passed']} passed, {summary['failed']} failed, {summary['skipped']} skipped "
                    f"of {summary['total']}")
    raise typer.Exit(EXIT_OK if summary["failed"] == 0 else EXIT_FAILED)


@app.command()
def checks():
    """List the registered checks in suite order."""
    table = Table(title="Registered checks", box=box.ROUNDED, header_style="bold magenta")
    table.add_column("Check", style="cyan", no_wrap=True)
    table.add_column("Statement")
    table.add_column("Anchor", style="dim white")
    for spec in registry():
        table.add_row(spec.id, spec.reference, spec.quote)
    out_console.print(table)


@app.command()
def valuation(
    net: Annotated[str, typer.Argument(help="Net spec, e.g. 'eps^2', 'exp(-1/eps)', 'sup:flat-gauss'")],
    config: ConfigOption = None,
    as_json: Annotated[bool, typer.Option("--json", help="Print the estimate as JSON")] = False,
):
    """Estimate the valuation of a net given in the small net grammar."""
    cfg = _load(config)
    ctx = CheckContext.from_config(cfg)
    try:
        parsed = parse_net(net, ctx.numerics)
        estimate = estimate_net(parsed, ctx.settings)
    except (ValueError, ColombeauError) as e:
        status("fail", f"Cannot evaluate '{net}': {e}")
        raise typer.Exit(EXIT_CONFIG)

    if as_json:
        typer.echo(dump_json(estimate.to_dict()), nl=False)
    else:
        out_console.print(f"{net}: {estimate.label()}")
        if estimate.classification is Classification.ORDER:
            out_console.print(f"slope {estimate.slope:.4f}, intercept {estimate.intercept:.4f}, "
                              f"residual {estimate.residual:.4f}")
    raise typer.Exit(EXIT_FAILED if estimate.classification is Classification.AMBIGUOUS else EXIT_OK)


def _kernel(cfg, skewed, table):
    if table is not None:
        return load_table(str(table))
    ctx = CheckContext.from_config(cfg)
    return ctx.lab.mollifier.build(skewed=skewed)


@mollifier_app.command("build")
def mollifier_build(
    out: Annotated[Path, typer.Option("--out", "-o", help="Where to write the kernel table")] = Path("phi_table.txt"),
    skewed: Annotated[bool, typer.Option("--skewed", help="Build the skewed variant")] = False,
    config: ConfigOption = None,
):
    """Synthesize, certify and export the kernel table."""
    cfg = _load(config)
    status("start", "Synthesizing kernel tables")
    try:
        with Timer("Kernel build", verbose=True):
            kernel = _kernel(cfg, skewed, None)
    except ColombeauError as e:
        status("fail", f"{type(e).__name__}: {e}")
        raise typer.Exit(EXIT_FAILED)
    export_table(kernel, str(out))
    status("file", f"Kernel table written to {out}")
    raise typer.Exit(EXIT_OK)


@mollifier_app.command("check")
def mollifier_check(
    alpha_max: Annotated[int, typer.Option("--alpha-max", help="Highest moment order checked", min=0, max=6)] = 6,
    table: Annotated[Optional[Path], typer.Option("--table", help="Check an exported table instead")] = None,
    skewed: Annotated[bool, typer.Option("--skewed", help="Check the skewed variant")] = False,
    config: ConfigOption = None,
):
    """Print the moment table and the build certificate."""
    cfg = _load(config)
    try:
        kernel = _kernel(cfg, skewed, table)
    except (OSError, ValueError, ColombeauError) as e:
        status("fail", f"{type(e).__name__}: {e}")
        raise typer.Exit(EXIT_FAILED)

    report = check_moments(kernel, alpha_max)
    frame = report.to_frame()
    moments = Table(title=f"Moments of {kernel.label}", box=box.ROUNDED, header_style="bold magenta")
    for col in ("alpha", "moment", "expected", "tolerance", "tail_bound", "passed"):
        moments.add_column(col, justify="right")
    for row in frame.itertuples(index=False):
        moments.add_row(str(row.alpha), f"{row.moment:.3e}", f"{row.expected:g}", f"{row.tolerance:.0e}",
                        f"{row.tail_bound:.1e}", "✅" if row.passed else "❌")
    out_console.print(moments)

    cert = Table(title="Certificate", box=box.ROUNDED, show_header=False)
    for key, value in sorted(kernel.certificate.items()):
        cert.add_row(key, f"{value:.12g}" if isinstance(value, float) else str(value))
    out_console.print(cert)

    if report.passed:
        status("ok", f"All {len(report.rows)} moment rows within tolerance")
        raise typer.Exit(EXIT_OK)
    status("fail", f"{len(report.failures)} moment rows outside tolerance")
    raise typer.Exit(EXIT_FAILED)


@app.command()
def report(
    input_path: Annotated[Path, typer.Argument(help="JSON report written by verify")],
    out: Annotated[Optional[Path], typer.Option("--out", "-o", help="CSV path (default: print)")] = None,
):
    """Render the plot-ready series of a report as CSV."""
    try:
        with open(input_path, "r", encoding="utf-8") as f:
            document = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        status("fail", f"Cannot read {input_path}: {e}")
        raise typer.Exit(EXIT_CONFIG)

    frame = series_frame(document)
    text = frame.to_csv(index=False, lineterminator="\n")
    if out is None:
        typer.echo(text, nl=False)
    else:
        write_atomic(str(out), text)
        status("data", f"{len(frame)} rows from {frame['check_id'].nunique()} checks written to {out}")
    raise typer.Exit(EXIT_OK)

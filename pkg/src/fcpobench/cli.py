"""
fcpobench command-line interface.

Subcommands:
  run    one (case, algorithm, seed) run
  bench  the benchmark matrix
  stats  statistical report over a results CSV
  twin   activation-site calibration demo
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from rich import box
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn
from rich.table import Table

from .analysis.report import stats_report
from .config import FILE_KEYS, HarnessConfig
from .errors import FcpoBenchError
from .harness import bench_matrix, demo_twin, matrix_tasks, run_case, run_seeds
from .twin.calibration import TwinConfig
from .utils.config_loader import load_config_file, parse_int

console = Console()
logger = logging.getLogger("fcpobench")

TWIN_FILE_KEYS = {"seed": "seed", "runs": "n_runs", "budget": "budget"}


def setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )


def _split(text: Optional[str]) -> Optional[List[str]]:
    if text is None:
        return None
    return [item.strip() for item in text.split(",") if item.strip()]


def _parallel(args: argparse.Namespace) -> Optional[int]:
    if getattr(args, "sequential", False):
        return 1
    return getattr(args, "parallel", None)


def harness_config(args: argparse.Namespace) -> HarnessConfig:
    """Dataclass defaults, then the --config file, then explicit flags."""
    overrides = dict(
        master_seed=args.seed,
        n_runs=getattr(args, "runs", None),
        budget=getattr(args, "budget", None),
        algorithms=_split(getattr(args, "algos", None)),
        cases=_split(getattr(args, "cases", None)),
        no_zoom=getattr(args, "no_zoom", None),
        no_eigen=getattr(args, "no_eigen", None),
        no_lpsr=getattr(args, "no_lpsr", None),
        parallel=_parallel(args),
        out=getattr(args, "out", None),
        record_runtime=False if getattr(args, "no_runtime", None) else None,
    )
    if args.config:
        return HarnessConfig.from_file(args.config, **overrides)
    return HarnessConfig.from_overrides(**overrides)


def _config_table(rows) -> Table:
    table = Table(show_header=False, box=box.ROUNDED)
    for key, value in rows:
        table.add_row(f"[cyan]{key}[/cyan]", str(value))
    return table


def cmd_run(args: argparse.Namespace) -> int:
    cfg = harness_config(args)
    seed = run_seeds(cfg.master_seed, args.case, args.run_index + 1)[args.run_index]
    with console.status(f"[bold cyan]Running {args.algo} on {args.case}..."):
        record = run_case(args.case, args.algo, seed, cfg)

    table = Table(title=f"{record.algorithm_id} on {args.case}", box=box.ROUNDED, border_style="green")
    table.add_column("Field", style="cyan")
    table.add_column("Value", style="yellow", justify="right")
    for key, value in record.to_row().items():
        table.add_row(key, f"{value:.17g}" if isinstance(value, float) else str(value))
    table.add_row("improvements", str(len(record.trace)))
    console.print(table)
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    cfg = harness_config(args)
    console.print(Panel.fit("[bold cyan]BENCHMARK MATRIX[/bold cyan]", border_style="cyan", padding=(1, 2)))
    console.print(_config_table([
        ("Master seed", cfg.master_seed),
        ("Runs per cell", cfg.n_runs),
        ("Budget", cfg.budget if cfg.budget is not None else f"{cfg.budget_per_dim} x D"),
        ("Algorithms", ", ".join(cfg.algorithms)),
        ("Cases", ", ".join(cfg.cases)),
        ("Ablations", ", ".join(n for n in ("no_zoom", "no_eigen", "no_lpsr") if getattr(cfg, n)) or "none"),
        ("Workers", cfg.parallel),
        ("Runtime column", "recorded" if cfg.record_runtime else "zeroed"),
        ("Output", cfg.out_dir),
    ]))

    total = len(matrix_tasks(cfg))
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TextColumn("{task.completed}/{task.total}"),
        console=console,
    ) as progress:
        task = progress.add_task("[cyan]Running...", total=total)

        def advance(record):
            progress.update(task, advance=1,
                            description=f"[cyan]{record.function_id}-{record.dimension} {record.algorithm_id}")

        result = bench_matrix(cfg, on_run_complete=advance)

    console.print(Panel.fit(
        "[bold green]BENCHMARK COMPLETE[/bold green]\n\n"
        + "\n".join(f"{name}: [cyan]{path}[/cyan]" for name, path in result.files.items()),
        border_style="green",
        padding=(1, 2),
    ))
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    with console.status(f"[bold cyan]Analyzing {args.results}..."):
        report = stats_report(args.results, args.out, control=args.control)
    console.print(report.text)
    for name, path in report.files.items():
        console.print(f"[green]wrote[/green] {name}: {path}")
    return 0


def twin_config(args: argparse.Namespace) -> TwinConfig:
    values = {}
    if args.config:
        raw = load_config_file(args.config, FILE_KEYS)
        values = {TWIN_FILE_KEYS[k]: parse_int(k, v) for k, v in raw.items() if k in TWIN_FILE_KEYS}
    for name, value in (("seed", args.seed), ("n_runs", args.runs), ("budget", args.budget)):
        if value is not None:
            values[name] = value
    return TwinConfig(**values)


def cmd_twin(args: argparse.Namespace) -> int:
    cfg = twin_config(args)
    out = Path(args.out or "twin")
    console.print(Panel.fit("[bold cyan]TWIN CALIBRATION[/bold cyan]", border_style="cyan", padding=(1, 2)))
    console.print(_config_table([
        ("Grid", f"{cfg.nx} x {cfg.ny}"),
        ("Sites", cfg.n_pmj),
        ("Leads", cfg.n_leads),
        ("Budget", cfg.budget),
        ("Runs", cfg.n_runs),
        ("Seed", cfg.seed),
        ("Output", out),
    ]))
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TextColumn("{task.completed}/{task.total}"),
        console=console,
    ) as progress:
        task = progress.add_task("[cyan]Calibrating...", total=cfg.n_runs)
        result = demo_twin(cfg, out, parallel=_parallel(args) or 1,
                           on_run_complete=lambda record: progress.advance(task))

    table = Table(title="Calibration runs", box=box.ROUNDED, border_style="green")
    for column in ("run", "final loss", "initial median", "relative"):
        table.add_column(column, justify="right")
    for i, run in enumerate(result.runs):
        table.add_row(str(i), f"{run.record.final_value:.4g}", f"{run.initial_median:.4g}",
                      f"{run.relative_loss:.3g}")
    console.print(table)
    for name, path in result.files.items():
        console.print(f"[green]wrote[/green] {name}: {path}")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="Master seed")
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")


def _add_matrix(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--budget", type=int, help="Evaluations per run (default 1000 x D)")
    parser.add_argument("--no-zoom", action="store_true", default=None, help="Disable zoomies moves")
    parser.add_argument("--no-eigen", action="store_true", default=None, help="Disable eigen refinement")
    parser.add_argument("--no-lpsr", action="store_true", default=None, help="Disable population reduction")


def _add_workers(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--parallel", type=int, metavar="N", help="Worker processes")
    group.add_argument("--sequential", action="store_true", help="Single process (determinism reference)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fcpobench",
        description="FCPO benchmark harness",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # One FCPO run on F1 at D=10
  fcpobench run --case F1-10 --algo fcpo

  # Small matrix, sequential
  fcpobench bench --cases F1-10,F10-20 --algos fcpo,pso --runs 5 --sequential --out results

  # Report
  fcpobench stats results/results.csv

  # Twin demo
  fcpobench twin --out twin
        """,
    )
    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    run_parser = subparsers.add_parser("run", help="Single run")
    _add_common(run_parser)
    _add_matrix(run_parser)
    run_parser.add_argument("--case", default="F1-10", help="Case id, e.g. F6-20")
    run_parser.add_argument("--algo", default="fcpo", help="Algorithm id")
    run_parser.add_argument("--run-index", type=int, default=0, help="Run number within the case")

    bench_parser = subparsers.add_parser("bench", help="Benchmark matrix")
    _add_common(bench_parser)
    _add_matrix(bench_parser)
    _add_workers(bench_parser)
    bench_parser.add_argument("--runs", type=int, help="Runs per case and algorithm")
    bench_parser.add_argument("--algos", help="Comma-separated algorithm ids")
    bench_parser.add_argument("--cases", help="Comma-separated case ids or 'all'")
    bench_parser.add_argument("--out", help="Output directory")
    bench_parser.add_argument("--no-runtime", action="store_true", default=None,
                              help="Write runtime_ms as 0 (byte-identical results.csv)")

    stats_parser = subparsers.add_parser("stats", help="Statistical report")
    stats_parser.add_argument("results", help="results.csv from bench")
    stats_parser.add_argument("--out", help="Output directory (default: beside the CSV)")
    stats_parser.add_argument("--control", default="fcpo", help="Control algorithm")
    stats_parser.add_argument("--verbose", action="store_true", help="Debug logging")

    twin_parser = subparsers.add_parser("twin", help="Twin calibration demo")
    _add_common(twin_parser)
    _add_workers(twin_parser)
    twin_parser.add_argument("--runs", type=int, help="Repeated calibrations")
    twin_parser.add_argument("--budget", type=int, help="Evaluations per calibration")
    twin_parser.add_argument("--out", help="Output directory")
    return parser


COMMANDS = {"run": cmd_run, "bench": cmd_bench, "stats": cmd_stats, "twin": cmd_twin}


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 1
    setup_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except (FcpoBenchError, OSError) as exc:
        console.print(f"[red]✗ {exc}[/red]")
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""
Statistical report over a results CSV.

Per case: descriptive statistics, Kruskal-Wallis, Dunn against the control
algorithm with Holm correction, and Cliff's delta. Across cases: median
rank table and Friedman test. Also writes plot-ready convergence and
runtime-vs-error files.
"""
import io
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from rich import box
from rich.console import Console
from rich.table import Table

from ..benchmarks.cases import BIASES
from ..errors import ContractViolation
from ..utils.matrix_io import PathLike
from ..utils.results_io import read_results, read_traces
from .nonparametric import (
    SampleGroup,
    TestReport,
    cliffs_delta,
    cliffs_delta_magnitude,
    describe,
    dunn_holm,
    friedman,
    kruskal_wallis,
    rank_table,
)

logger = logging.getLogger(__name__)

ALPHA = 0.05
CONVERGENCE_POINTS = 100
PARETO_ERROR_FLOOR = 1e-12


@dataclass
class PairwiseResult:
    algorithm: str
    z: float
    p_raw: float
    p_adjusted: float
    cliffs_delta: float
    magnitude: str


@dataclass
class CaseReport:
    function: str
    dim: int
    descriptives: Dict[str, Dict[str, float]]
    kruskal: TestReport
    omnibus_rejected: bool
    pairwise: List[PairwiseResult]

    @property
    def case_id(self) -> str:
        return f"{self.function}-{self.dim}"


@dataclass
class StatsReport:
    control: str
    algorithms: List[str]
    cases: List[CaseReport]
    ranks: np.ndarray
    average_ranks: Dict[str, float]
    friedman: Optional[TestReport]
    record: Dict[str, Dict[str, int]] = field(default_factory=dict)
    files: Dict[str, Path] = field(default_factory=dict)
    text: str = ""


def known_optimum(function_id: str) -> float:
    return BIASES.get(function_id, 0.0)


def _case_groups(frame: pd.DataFrame, algorithms: List[str]) -> List[SampleGroup]:
    return [
        SampleGroup(label=a, values=frame.loc[frame["algorithm"] == a, "final_value"].to_numpy())
        for a in algorithms
    ]


def analyze_case(frame: pd.DataFrame, algorithms: List[str], control: str) -> CaseReport:
    """Tests and effect sizes for one (function, dim) slice of the results."""
    groups = _case_groups(frame, algorithms)
    sizes = {g.label: g.values.size for g in groups}
    if len(set(sizes.values())) != 1:
        raise ContractViolation(
            f"unequal run counts for {frame['function'].iloc[0]}-{frame['dim'].iloc[0]}: {sizes}"
        )
    kw = kruskal_wallis(groups)
    control_values = next(g.values for g in groups if g.label == control)
    pairwise = []
    for row in dunn_holm(groups, control):
        other = next(g.values for g in groups if g.label == row.label)
        delta = cliffs_delta(control_values, other)
        pairwise.append(PairwiseResult(
            algorithm=row.label, z=row.z, p_raw=row.p_raw, p_adjusted=row.p_adjusted,
            cliffs_delta=delta, magnitude=cliffs_delta_magnitude(delta),
        ))
    return CaseReport(
        function=str(frame["function"].iloc[0]),
        dim=int(frame["dim"].iloc[0]),
        descriptives={g.label: describe(g.values) for g in groups},
        kruskal=kw,
        omnibus_rejected=kw.p_value < ALPHA,
        pairwise=pairwise,
    )


def win_tie_loss(cases: List[CaseReport]) -> Dict[str, Dict[str, int]]:
    """
    Control's record against each algorithm: a significant Dunn comparison
    (adjusted p < 0.05) is a win when Cliff's delta is negative.
    """
    record: Dict[str, Dict[str, int]] = {}
    for case in cases:
        for pair in case.pairwise:
            entry = record.setdefault(pair.algorithm, {"wins": 0, "ties": 0, "losses": 0})
            if pair.p_adjusted >= ALPHA or pair.cliffs_delta == 0:
                entry["ties"] += 1
            elif pair.cliffs_delta < 0:
                entry["wins"] += 1
            else:
                entry["losses"] += 1
    return record


def convergence_table(frame: pd.DataFrame, traces: Dict[str, List]) -> pd.DataFrame:
    """Median best-so-far per case and algorithm on a shared NFE grid per case."""
    rows = []
    for (function, dim), case_frame in frame.groupby(["function", "dim"], sort=True):
        max_nfe = int(case_frame["nfe"].max())
        grid = np.unique(np.linspace(1, max_nfe, CONVERGENCE_POINTS).round().astype(int))
        for algorithm, algo_frame in case_frame.groupby("algorithm", sort=True):
            curves = []
            for _, run in algo_frame.iterrows():
                run_id = f"{function}|{dim}|{algorithm}|{run['seed']}"
                events = traces.get(run_id, [])
                nfes = np.array([e[0] for e in events], dtype=int)
                bests = np.array([e[1] for e in events], dtype=float)
                idx = np.searchsorted(nfes, grid, side="right") - 1
                curve = np.where(idx >= 0, bests[np.maximum(idx, 0)] if bests.size else np.inf, np.inf)
                curves.append(curve)
            median = np.median(np.vstack(curves), axis=0)
            rows.extend(
                {"function": function, "dim": dim, "algorithm": algorithm, "nfe": int(n), "median_best": float(m)}
                for n, m in zip(grid, median)
            )
    return pd.DataFrame(rows, columns=["function", "dim", "algorithm", "nfe", "median_best"])


def pareto_table(frame: pd.DataFrame) -> pd.DataFrame:
    """
    Mean runtime and median error relative to the best algorithm's median error per case.

    Both errors are floored at PARETO_ERROR_FLOOR before the ratio, so a case
    solved to (or below) the known optimum gives finite ratios and the best
    algorithm always scores 1.
    """
    rows = []
    for (function, dim), case_frame in frame.groupby(["function", "dim"], sort=True):
        errors = {
            a: float(np.median(g["final_value"] - known_optimum(function)))
            for a, g in case_frame.groupby("algorithm", sort=True)
        }
        best = max(min(errors.values()), PARETO_ERROR_FLOOR)
        for algorithm, g in case_frame.groupby("algorithm", sort=True):
            err = errors[algorithm]
            relative = max(err, PARETO_ERROR_FLOOR) / best
            rows.append({
                "function": function, "dim": dim, "algorithm": algorithm,
                "mean_runtime_ms": float(g["runtime_ms"].mean()),
                "median_error": err, "relative_median_error": relative,
            })
    return pd.DataFrame(rows)


def render_report(report: StatsReport, width: int = 120) -> str:
    """Plain-text rendering of the report tables."""
    console = Console(file=io.StringIO(), width=width, record=True, color_system=None)
    for case in report.cases:
        table = Table(title=f"{case.case_id}  Kruskal-Wallis H={case.kruskal.statistic:.4f} "
                            f"p={case.kruskal.p_value:.4g}"
                            f"{'  (omnibus rejected)' if case.omnibus_rejected else ''}",
                      box=box.SIMPLE)
        for column in ("algorithm", "mean", "std", "median", "z", "p_adj", "delta", "effect"):
            table.add_column(column, justify="right" if column != "algorithm" else "left")
        by_algo = {p.algorithm: p for p in case.pairwise}
        for algorithm in report.algorithms:
            d = case.descriptives[algorithm]
            p = by_algo.get(algorithm)
            table.add_row(
                algorithm, f"{d['mean']:.6g}", f"{d['std']:.3g}", f"{d['median']:.6g}",
                f"{p.z:.3f}" if p else "-", f"{p.p_adjusted:.4g}" if p else "control",
                f"{p.cliffs_delta:.3f}" if p else "-", p.magnitude if p else "-",
            )
        console.print(table)

    ranks = Table(title="Average rank of median final value (1 = best)", box=box.SIMPLE)
    ranks.add_column("algorithm")
    ranks.add_column("avg rank", justify="right")
    ranks.add_column(f"{report.control} W/T/L", justify="right")
    for algorithm in report.algorithms:
        wtl = report.record.get(algorithm)
        ranks.add_row(
            algorithm, f"{report.average_ranks[algorithm]:.3f}",
            f"{wtl['wins']}/{wtl['ties']}/{wtl['losses']}" if wtl else "-",
        )
    console.print(ranks)
    if report.friedman is not None:
        console.print(f"Friedman chi2={report.friedman.statistic:.4f} df={report.friedman.df} "
                      f"p={report.friedman.p_value:.4g}")
    return console.export_text()


def _summary(report: StatsReport) -> Dict:
    return {
        "control": report.control,
        "algorithms": report.algorithms,
        "average_ranks": report.average_ranks,
        "friedman": asdict(report.friedman) if report.friedman else None,
        "win_tie_loss": report.record,
        "cases": [
            {
                "case": c.case_id,
                "kruskal_wallis": asdict(c.kruskal),
                "omnibus_rejected": c.omnibus_rejected,
                "descriptives": c.descriptives,
                "dunn": [asdict(p) for p in c.pairwise],
            }
            for c in report.cases
        ],
    }


def stats_report(results_csv: PathLike, out_dir: Optional[PathLike] = None,
                 control: str = "fcpo") -> StatsReport:
    """
    Analyze a results CSV and write report.txt, summary.json, pareto.csv and,
    when traces.jsonl sits beside the CSV, convergence.csv.

    Args:
        results_csv: Harness CSV
        out_dir: Output directory (defaults to the CSV's directory)
        control: Algorithm the others are compared against; falls back to
            the first algorithm in sorted order when absent

    Returns:
        StatsReport
    """
    results_csv = Path(results_csv)
    out = Path(out_dir) if out_dir is not None else results_csv.parent
    out.mkdir(parents=True, exist_ok=True)
    frame = read_results(results_csv)

    algorithms = sorted(frame["algorithm"].unique().tolist())
    if len(algorithms) < 2:
        raise ContractViolation("the report needs at least two algorithms")
    if control not in algorithms:
        logger.warning("control '%s' not in results, using '%s'", control, algorithms[0])
        control = algorithms[0]
    ordered = [control] + [a for a in algorithms if a != control]

    cases = [
        analyze_case(case_frame, ordered, control)
        for _, case_frame in frame.groupby(["function", "dim"], sort=True)
    ]
    medians = np.array([[c.descriptives[a]["median"] for a in ordered] for c in cases])
    ranks, average = rank_table(medians)
    report = StatsReport(
        control=control,
        algorithms=ordered,
        cases=cases,
        ranks=ranks,
        average_ranks={a: float(r) for a, r in zip(ordered, average)},
        friedman=friedman(ranks) if len(cases) >= 2 else None,
    )
    report.record = win_tie_loss(cases)
    report.text = render_report(report)

    report.files["report"] = out / "report.txt"
    report.files["report"].write_text(report.text, encoding="utf-8")
    report.files["summary"] = out / "summary.json"
    report.files["summary"].write_text(json.dumps(_summary(report), indent=2), encoding="utf-8")
    report.files["pareto"] = out / "pareto.csv"
    pareto_table(frame).to_csv(report.files["pareto"], index=False, float_format="%.17g")

    traces_path = results_csv.parent / "traces.jsonl"
    if traces_path.exists():
        report.files["convergence"] = out / "convergence.csv"
        convergence_table(frame, read_traces(traces_path)).to_csv(
            report.files["convergence"], index=False, float_format="%.17g"
        )
    else:
        logger.warning("no traces.jsonl beside %s, skipping convergence.csv", results_csv)
    logger.info("stats report for %d cases and %d algorithms written to %s", len(cases), len(ordered), out)
    return report

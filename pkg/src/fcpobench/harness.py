"""
Benchmark harness: single runs, the run matrix and the twin demo.

Runs are independent, so the matrix fans out over a process pool and the
records are merged in (case, algorithm, seed) order before anything is
written; a sequential run is the determinism reference.
"""
import json
import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from .benchmarks.cases import FUNCTION_IDS, BenchmarkCase, make_case, parse_case_id
from .config import DEFAULT_CASES, HarnessConfig
from .core.base_models import Budget, RunRecord
from .core.rng import RngStream, derive_run_seed
from .errors import ConfigurationError
from .optimizers.fcpo import FcpoConfig, FcpoOptimizer
from .optimizers.registry import create_optimizer
from .twin.calibration import TwinConfig, TwinProblem, activation_std, calibrate, make_problem
from .twin.forward import activation_map
from .utils.matrix_io import MatrixHeader, PathLike, save_matrix
from .utils.results_io import write_results, write_traces

logger = logging.getLogger(__name__)

RUN_SEED_STREAM = 10_000
ProgressCallback = Callable[[RunRecord], None]


@dataclass
class BenchResult:
    records: List[RunRecord]
    files: Dict[str, Path] = field(default_factory=dict)


@dataclass
class TwinRun:
    seed: int
    record: RunRecord
    initial_median: float
    activation: np.ndarray

    @property
    def relative_loss(self) -> float:
        if self.initial_median == 0 or not np.isfinite(self.initial_median):
            return 0.0 if self.record.final_value == 0 else np.inf
        return self.record.final_value / self.initial_median


@dataclass
class TwinResult:
    problem: TwinProblem
    runs: List[TwinRun]
    loss_curve: pd.DataFrame
    sigma_ta: np.ndarray
    files: Dict[str, Path] = field(default_factory=dict)


def case_index(case_id: str) -> int:
    """Position of a case in the full suite."""
    fid, dim = parse_case_id(case_id)
    try:
        return DEFAULT_CASES.index(f"{fid}-{dim}")
    except ValueError:
        raise ConfigurationError(f"unknown case '{case_id}'; expected one of {', '.join(DEFAULT_CASES)}") from None


def instance_seed(master_seed: int, case_id: str) -> int:
    """Seed of a case's synthetic transforms; matches `suite(master_seed)`."""
    return derive_run_seed(master_seed, case_index(case_id))


def run_seeds(master_seed: int, case_id: str, n_runs: int) -> List[int]:
    """Per-run seeds of a case, shared by every algorithm."""
    stream = derive_run_seed(master_seed, RUN_SEED_STREAM + case_index(case_id))
    return [derive_run_seed(stream, r) for r in range(n_runs)]


def run_case(case: Union[BenchmarkCase, str], algorithm: str, seed: int,
             cfg: Optional[HarnessConfig] = None) -> RunRecord:
    """
    Run one optimizer once on one case.

    Args:
        case: BenchmarkCase or case id such as "F6-20"
        algorithm: Algorithm id
        seed: Run seed
        cfg: Harness config (budget, FCPO settings); defaults when None

    Returns:
        RunRecord
    """
    cfg = cfg or HarnessConfig()
    if isinstance(case, str):
        fid, dim = parse_case_id(case)
        case = make_case(fid, dim, instance_seed(cfg.master_seed, case))
    optimizer = create_optimizer(algorithm, cfg.fcpo_config())
    return optimizer.minimize(case, Budget(cfg.budget_for(case.D)), RngStream(seed))


def _run_task(case_id: str, algorithm: str, seed: int, cfg: HarnessConfig) -> RunRecord:
    return run_case(case_id, algorithm, seed, cfg)


def _record_key(record: RunRecord) -> Tuple[int, int, str, int]:
    return FUNCTION_IDS.index(record.function_id), record.dimension, record.algorithm_id, record.seed


def matrix_tasks(cfg: HarnessConfig) -> List[Tuple[str, str, int]]:
    """Every (case id, algorithm, seed) of the matrix."""
    return [
        (case_id, algorithm, seed)
        for case_id in cfg.cases
        for algorithm in cfg.algorithms
        for seed in run_seeds(cfg.master_seed, case_id, cfg.n_runs)
    ]


def bench_matrix(cfg: HarnessConfig, on_run_complete: Optional[ProgressCallback] = None) -> BenchResult:
    """
    Run the full matrix and write results.csv, traces.jsonl and config.json to cfg.out.

    With cfg.record_runtime off every runtime_ms is written as 0, which makes
    results.csv byte-identical for equal seeds whatever the worker count.

    Args:
        cfg: Harness config
        on_run_complete: Called once per finished run, in completion order

    Returns:
        BenchResult with records sorted by (case, algorithm, seed)
    """
    tasks = matrix_tasks(cfg)
    logger.info("running %d runs (%d cases x %d algorithms x %d seeds) with %d worker(s)",
                len(tasks), len(cfg.cases), len(cfg.algorithms), cfg.n_runs, cfg.parallel)
    records: List[RunRecord] = []
    if cfg.parallel == 1:
        for case_id, algorithm, seed in tasks:
            record = run_case(case_id, algorithm, seed, cfg)
            records.append(record)
            if on_run_complete:
                on_run_complete(record)
    else:
        with ProcessPoolExecutor(max_workers=cfg.parallel) as executor:
            futures = [executor.submit(_run_task, case_id, algorithm, seed, cfg)
                       for case_id, algorithm, seed in tasks]
            for future in as_completed(futures):
                record = future.result()
                records.append(record)
                if on_run_complete:
                    on_run_complete(record)
    records.sort(key=_record_key)
    if not cfg.record_runtime:
        records = [replace(r, runtime_ms=0.0) for r in records]

    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    result = BenchResult(records)
    result.files["results"] = write_results(records, out / "results.csv")
    result.files["traces"] = write_traces(records, out / "traces.jsonl")
    result.files["config"] = out / "config.json"
    result.files["config"].write_text(json.dumps(cfg.to_dict(), indent=2), encoding="utf-8")
    logger.info("wrote %d records to %s", len(records), out)
    return result


def _twin_task(cfg: TwinConfig, problem: TwinProblem, seed: int) -> TwinRun:
    optimizer = FcpoOptimizer(FcpoConfig(p_init=cfg.p_init))
    pmj, record = calibrate(
        problem.target, problem.graph, problem.lead_field, cfg.n_pmj, None, cfg.budget,
        RngStream(seed), onset_max=cfg.onset_max, tau=cfg.tau, optimizer=optimizer,
    )
    return TwinRun(
        seed=seed,
        record=record,
        initial_median=float(np.median(optimizer.initial_values)),
        activation=activation_map(problem.graph, pmj),
    )


def loss_curve(runs: List[TwinRun]) -> pd.DataFrame:
    """Mean and sample std of best-so-far loss per iteration; short runs hold their last value."""
    length = max(len(r.record.iteration_best) for r in runs)
    curves = []
    for run in runs:
        values = list(run.record.iteration_best) or [run.record.final_value]
        curves.append(values + [values[-1]] * (length - len(values)))
    stacked = np.array(curves, dtype=float)
    std = stacked.std(axis=0, ddof=1) if len(runs) > 1 else np.zeros(stacked.shape[1])
    return pd.DataFrame({
        "iteration": np.arange(1, stacked.shape[1] + 1),
        "mean_loss": stacked.mean(axis=0),
        "std_loss": std,
    })


def demo_twin(cfg: TwinConfig, out_dir: PathLike, parallel: int = 1,
              on_run_complete: Optional[ProgressCallback] = None) -> TwinResult:
    """
    Build a hidden-truth problem, calibrate it n_runs times and write the artifacts.

    Files: twin_loss_curve.csv, twin_sigma_ta.txt (node, x, y, sigma rows),
    twin_target_ecg.txt, twin_truth_activation.txt (ny x nx grid) and
    twin_runs.csv.

    Args:
        cfg: Twin config
        out_dir: Output directory
        parallel: Worker processes for the repeated calibrations
        on_run_complete: Called once per finished calibration

    Returns:
        TwinResult
    """
    problem = make_problem(cfg, RngStream(derive_run_seed(cfg.seed, 0)))
    seeds = [derive_run_seed(cfg.seed, r + 1) for r in range(cfg.n_runs)]
    runs: List[TwinRun] = []
    if parallel == 1:
        for seed in seeds:
            runs.append(_twin_task(cfg, problem, seed))
            if on_run_complete:
                on_run_complete(runs[-1].record)
    else:
        with ProcessPoolExecutor(max_workers=parallel) as executor:
            futures = [executor.submit(_twin_task, cfg, problem, seed) for seed in seeds]
            for future in as_completed(futures):
                runs.append(future.result())
                if on_run_complete:
                    on_run_complete(runs[-1].record)
        runs.sort(key=lambda r: seeds.index(r.seed))

    sigma = activation_std([r.activation for r in runs])
    result = TwinResult(problem=problem, runs=runs, loss_curve=loss_curve(runs), sigma_ta=sigma)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    graph = problem.graph
    result.files["loss_curve"] = out / "twin_loss_curve.csv"
    result.loss_curve.to_csv(result.files["loss_curve"], index=False, float_format="%.17g")
    sigma_rows = np.column_stack([np.arange(graph.n_nodes), graph.positions, sigma])
    result.files["sigma_ta"] = save_matrix(
        out / "twin_sigma_ta.txt", sigma_rows, MatrixHeader("twin_sigma_ta", graph.n_nodes, cfg.seed)
    )
    result.files["target_ecg"] = save_matrix(
        out / "twin_target_ecg.txt", problem.target.leads,
        MatrixHeader("twin_target_ecg", problem.target.n_leads, cfg.seed),
    )
    truth_map = activation_map(graph, problem.truth).reshape(graph.ny, graph.nx)
    result.files["truth_activation"] = save_matrix(
        out / "twin_truth_activation.txt", truth_map,
        MatrixHeader("twin_truth_activation", graph.n_nodes, cfg.seed),
    )
    result.files["runs"] = out / "twin_runs.csv"
    pd.DataFrame([
        {
            "run": i, "seed": r.seed, "final_loss": r.record.final_value,
            "initial_median_loss": r.initial_median, "relative_loss": r.relative_loss,
            "nfe": r.record.nfe, "runtime_ms": r.record.runtime_ms,
        }
        for i, r in enumerate(runs)
    ]).to_csv(result.files["runs"], index=False, float_format="%.17g")
    (out / "twin_config.json").write_text(json.dumps(asdict(cfg), indent=2), encoding="utf-8")
    logger.info("twin demo: %d runs, median relative loss %.3g, written to %s",
                len(runs), float(np.median([r.relative_loss for r in runs])), out)
    return result

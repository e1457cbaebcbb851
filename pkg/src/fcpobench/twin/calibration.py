"""
Self-calibration of activation sites against a synthetic target ECG.

A hidden PmjConfig produces the target; FCPO searches the (u, v, onset)
triples of every site so the simulated ECG matches it under the aligned loss.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..core.base_models import Bounds, Budget, Objective, RunRecord
from ..core.rng import RngStream
from ..errors import ConfigurationError, ContractViolation, InsufficientSamplesError
from ..optimizers.fcpo import FcpoConfig, FcpoOptimizer
from .ecg_loss import align_and_loss
from .forward import DEFAULT_TAU_MS, EcgSignal, GridGraph, LeadField, PmjConfig, activation_map, pseudo_ecg

logger = logging.getLogger(__name__)


@dataclass
class TwinConfig:
    """
    Twin demo settings.

    Attributes:
        nx, ny: Grid size
        n_leads: Number of pseudo-ECG leads
        n_pmj: Activation sites to recover
        horizon: Samples per lead (1 ms each)
        budget: Evaluations per calibration
        onset_max: Upper bound on site onsets (ms)
        tau: Pulse width (ms)
        speed_mean: Mean conduction speed (grid units per ms)
        heterogeneity: Log-normal spread of node speeds; 0 gives a uniform tissue
        p_init: FCPO initial population
        n_runs: Repeated calibrations for the variability map
        seed: Master seed of the problem instance and the runs
    """
    nx: int = 40
    ny: int = 40
    n_leads: int = 8
    n_pmj: int = 3
    horizon: int = 150
    budget: int = 6000
    onset_max: float = 50.0
    tau: float = DEFAULT_TAU_MS
    speed_mean: float = 1.0
    heterogeneity: float = 0.2
    p_init: int = 30
    n_runs: int = 10
    seed: int = 2024

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ConfigurationError(f"grid must be at least 2x2 (got {self.nx}x{self.ny})")
        for name in ("n_leads", "n_pmj", "horizon", "budget", "p_init"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be positive (got {getattr(self, name)})")
        if self.onset_max <= 0 or self.tau <= 0 or self.speed_mean <= 0:
            raise ConfigurationError("onset_max, tau and speed_mean must be positive")
        if self.n_runs < 2:
            raise ConfigurationError(f"n_runs must be >= 2 for the variability map (got {self.n_runs})")
        if self.heterogeneity < 0:
            raise ConfigurationError(f"heterogeneity must be non-negative (got {self.heterogeneity})")
        if self.budget < self.p_init:
            raise ConfigurationError(f"budget ({self.budget}) cannot cover p_init ({self.p_init})")


@dataclass
class TwinProblem:
    graph: GridGraph
    lead_field: LeadField
    truth: PmjConfig
    target: EcgSignal


def site_bounds(graph: GridGraph, n_pmj: int, onset_max: float) -> Bounds:
    """Grid rectangle times [0, onset_max] for each of n_pmj sites."""
    lb = np.tile([0.0, 0.0, 0.0], n_pmj)
    ub = np.tile([graph.nx - 1.0, graph.ny - 1.0, float(onset_max)], n_pmj)
    return Bounds(lb, ub)


def simulate(graph: GridGraph, lead_field: LeadField, pmj: PmjConfig, horizon: int,
             tau: float = DEFAULT_TAU_MS) -> EcgSignal:
    return pseudo_ecg(activation_map(graph, pmj), lead_field, horizon, tau)


def make_problem(cfg: TwinConfig, rng: RngStream) -> TwinProblem:
    """
    Random tissue, lead field and hidden sites, plus the target they produce.

    Node speeds are speed_mean * exp(heterogeneity * N(0, 1)).
    """
    speed = cfg.speed_mean * np.exp(cfg.heterogeneity * rng.normal(size=cfg.nx * cfg.ny))
    graph = GridGraph(cfg.nx, cfg.ny, speed)
    lead_field = LeadField.generate(graph, cfg.n_leads, rng)
    bounds = site_bounds(graph, cfg.n_pmj, cfg.onset_max)
    truth = PmjConfig.from_vector(bounds.lb + rng.uniform(size=bounds.dimension) * bounds.width)
    target = simulate(graph, lead_field, truth, cfg.horizon, cfg.tau)
    logger.debug("twin problem: %dx%d grid, %d leads, truth sites %s",
                 cfg.nx, cfg.ny, cfg.n_leads, truth.sites.round(2).tolist())
    return TwinProblem(graph, lead_field, truth, target)


class TwinObjective(Objective):
    """Aligned ECG loss of the sites encoded in a 3 * n_pmj decision vector."""
    thread_safe = True

    def __init__(self, target: EcgSignal, graph: GridGraph, lead_field: LeadField,
                 n_pmj: int, onset_max: float = 50.0, tau: float = DEFAULT_TAU_MS):
        if lead_field.n_leads != target.n_leads:
            raise ContractViolation(
                f"lead field has {lead_field.n_leads} leads, target has {target.n_leads}"
            )
        super().__init__(site_bounds(graph, n_pmj, onset_max), name="twin")
        self.target = target
        self.graph = graph
        self.lead_field = lead_field
        self.tau = tau

    def evaluate(self, x: np.ndarray) -> float:
        sim = simulate(self.graph, self.lead_field, PmjConfig.from_vector(x), self.target.n_samples, self.tau)
        return align_and_loss(self.target, sim).loss


def calibrate(target: EcgSignal, graph: GridGraph, lead_field: LeadField, n_pmj: int,
              fcpo_config: Optional[FcpoConfig], budget: int, rng: RngStream,
              onset_max: float = 50.0, tau: float = DEFAULT_TAU_MS,
              optimizer: Optional[FcpoOptimizer] = None) -> Tuple[PmjConfig, RunRecord]:
    """
    Recover activation sites from a target ECG with FCPO.

    Args:
        target: Target ECG
        graph: Tissue graph
        lead_field: Lead field matching the target's leads
        n_pmj: Number of sites to fit
        fcpo_config: FCPO parameters (defaults when None)
        budget: Evaluation budget
        rng: Random stream of this calibration
        onset_max: Upper bound on onsets (ms)
        tau: Pulse width (ms)
        optimizer: Optimizer to run; pass one to read its counts and
            initial_values afterwards

    Returns:
        (best PmjConfig, RunRecord)
    """
    objective = TwinObjective(target, graph, lead_field, n_pmj, onset_max, tau)
    optimizer = optimizer or FcpoOptimizer(fcpo_config)
    record = optimizer.minimize(objective, Budget(budget), rng)
    return PmjConfig.from_vector(record.best_position), record


def activation_std(runs: Sequence[np.ndarray]) -> np.ndarray:
    """
    Per-node sample standard deviation (divisor N - 1) of activation maps.

    Deviations are taken from the first run before the two-pass variance, so
    nodes where every run agrees get exactly 0.
    """
    if len(runs) < 2:
        raise InsufficientSamplesError(f"activation_std needs at least 2 runs (got {len(runs)})")
    sizes = {np.asarray(r).size for r in runs}
    if len(sizes) != 1:
        raise ContractViolation(f"activation maps differ in node count: {sorted(sizes)}")
    stacked = np.vstack([np.asarray(r, dtype=float).reshape(-1) for r in runs])
    dev = stacked - stacked[0]
    centered = dev - dev.sum(axis=0) / len(runs)
    return np.sqrt((centered * centered).sum(axis=0) / (len(runs) - 1))

"""
Optimizers: FCPO with its Markov controller, and the PSO, SHADE, L-SHADE
and CMA-ES baselines.
"""

from .baseline_config import BaselineConfig
from .cmaes import CmaesOptimizer, cmaes_run
from .fcpo import FcpoConfig, FcpoOptimizer, fcpo_run, iterations_for_budget
from .pso import PsoOptimizer, pso_run
from .registry import ALGORITHM_IDS, create_optimizer
from .shade import ShadeOptimizer, lshade_run, shade_run

__all__ = [
    "BaselineConfig",
    "CmaesOptimizer",
    "cmaes_run",
    "FcpoConfig",
    "FcpoOptimizer",
    "fcpo_run",
    "iterations_for_budget",
    "PsoOptimizer",
    "pso_run",
    "ALGORITHM_IDS",
    "create_optimizer",
    "ShadeOptimizer",
    "lshade_run",
    "shade_run",
]

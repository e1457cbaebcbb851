"""
fcpobench: FCPO, a Markov-switching particle swarm optimizer, with PSO,
SHADE, L-SHADE and CMA-ES baselines, CEC-2022-style benchmark cases,
nonparametric statistics and an activation-site calibration demo.
"""

from .config import HarnessConfig
from .harness import bench_matrix, demo_twin, run_case
from .optimizers import FcpoConfig, FcpoOptimizer, create_optimizer, fcpo_run

__version__ = "1.0.0"
__all__ = [
    "HarnessConfig",
    "bench_matrix",
    "demo_twin",
    "run_case",
    "FcpoConfig",
    "FcpoOptimizer",
    "create_optimizer",
    "fcpo_run",
]

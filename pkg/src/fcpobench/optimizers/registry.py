"""
Algorithm identifiers and optimizer factories.
"""
from dataclasses import replace
from typing import Callable, Dict, Optional

from ..core.base_models import BaseOptimizer
from ..errors import ConfigurationError
from .baseline_config import BaselineConfig
from .cmaes import CmaesOptimizer
from .fcpo import FcpoConfig, FcpoOptimizer
from .pso import PsoOptimizer
from .shade import ShadeOptimizer

FCPO_VARIANTS = {
    "fcpo": {},
    "fcpo_nozoom": {"no_zoom": True},
    "fcpo_noeigen": {"no_eigen": True},
    "fcpo_nolpsr": {"no_lpsr": True},
}

BASELINE_FACTORIES: Dict[str, Callable[[BaselineConfig], BaseOptimizer]] = {
    "pso": PsoOptimizer,
    "shade": lambda cfg: ShadeOptimizer(cfg),
    "lshade": lambda cfg: ShadeOptimizer(cfg, linear_reduction=True),
    "cmaes": CmaesOptimizer,
}

ALGORITHM_IDS = tuple(FCPO_VARIANTS) + tuple(BASELINE_FACTORIES)


def create_optimizer(
    algorithm_id: str,
    fcpo_config: Optional[FcpoConfig] = None,
    baseline_config: Optional[BaselineConfig] = None,
) -> BaseOptimizer:
    """
    Build a fresh optimizer for one run.

    Args:
        algorithm_id: One of ALGORITHM_IDS
        fcpo_config: Base FCPO config; ablation ids switch their flag on top of it
        baseline_config: Baseline config; its algorithm_id is overridden

    Returns:
        Optimizer instance
    """
    if algorithm_id in FCPO_VARIANTS:
        cfg = replace(fcpo_config or FcpoConfig(), **FCPO_VARIANTS[algorithm_id])
        return FcpoOptimizer(cfg, algorithm_id=algorithm_id)
    if algorithm_id in BASELINE_FACTORIES:
        base = baseline_config or BaselineConfig()
        return BASELINE_FACTORIES[algorithm_id](replace(base, algorithm_id=algorithm_id))
    raise ConfigurationError(
        f"unknown algorithm '{algorithm_id}', expected one of {', '.join(ALGORITHM_IDS)}"
    )

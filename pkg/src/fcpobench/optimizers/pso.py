"""
Global-best particle swarm optimization baseline.
"""
import logging
from typing import List, Optional

import numpy as np

from ..core.base_models import BaseOptimizer, Budget, Objective, RunRecord, clip_to_bounds
from ..core.rng import RngStream
from ..errors import ConfigurationError
from .baseline_config import BaselineConfig

logger = logging.getLogger(__name__)

DEFAULT_SWARM_SIZE = 30


class PsoOptimizer(BaseOptimizer):
    """
    Global-best PSO with inertia decreasing linearly from w_start to w_end
    over the evaluation budget. Velocity clamp and position clipping match
    the FCPO neutral update.
    """
    algorithm_id = "pso"

    def __init__(self, config: Optional[BaselineConfig] = None):
        self.config = config or BaselineConfig(algorithm_id="pso")

    def _search(self, f: Objective, budget: Budget, rng: RngStream) -> List[float]:
        cfg = self.config
        n = cfg.population or DEFAULT_SWARM_SIZE
        if budget.remaining < n:
            raise ConfigurationError(f"budget of {budget.remaining} evaluations cannot cover {n} particles")
        bounds = f.bounds
        d = bounds.dimension
        v_max = cfg.v_max_fraction * bounds.width
        max_nfe = budget.max_nfe

        X = bounds.lb + rng.uniform((n, d)) * bounds.width
        V = np.zeros((n, d))
        J = budget.evaluate_many(f, X)
        P, JP = X.copy(), J.copy()
        g = int(np.argmin(JP))
        iteration_best: List[float] = []

        while not budget.exhausted:
            for i in range(n):
                if budget.exhausted:
                    break
                w = cfg.w_start - (cfg.w_start - cfg.w_end) * budget.used_nfe / max_nfe
                r1, r2 = rng.uniform(d), rng.uniform(d)
                V[i] = w * V[i] + cfg.c1 * r1 * (P[i] - X[i]) + cfg.c2 * r2 * (P[g] - X[i])
                V[i] = np.clip(V[i], -v_max, v_max)
                X[i] = clip_to_bounds(X[i] + V[i], bounds)
                value = budget.evaluate(f, X[i])
                if value < JP[i]:
                    P[i], JP[i] = X[i].copy(), value
                    if value < JP[g]:
                        g = i
            iteration_best.append(float(JP[g]))
        return iteration_best


def pso_run(f: Objective, cfg: BaselineConfig, budget: Budget, rng: RngStream) -> RunRecord:
    return PsoOptimizer(cfg).minimize(f, budget, rng)

"""
Success-history based adaptive differential evolution (SHADE) and its
linear population size reduction variant (L-SHADE).

Both use current-to-pbest/1/bin mutation with an external archive of
replaced parents, and a circular memory of successful CR and F values
updated with improvement-weighted means.
"""
import logging
from typing import List, Optional

import numpy as np

from ..core.base_models import BaseOptimizer, Budget, Objective, RunRecord
from ..core.rng import RngStream
from ..errors import ConfigurationError
from .baseline_config import BaselineConfig

logger = logging.getLogger(__name__)


class ShadeOptimizer(BaseOptimizer):
    """
    SHADE; with `linear_reduction=True` it becomes L-SHADE, shrinking the
    population linearly in the number of used evaluations from its initial
    size to `min_population`.
    """
    algorithm_id = "shade"

    def __init__(self, config: Optional[BaselineConfig] = None, linear_reduction: bool = False):
        self.linear_reduction = linear_reduction
        self.algorithm_id = "lshade" if linear_reduction else "shade"
        self.config = config or BaselineConfig(algorithm_id=self.algorithm_id)
        self.population_history: List[int] = []
        self.memory_history: List[np.ndarray] = []

    def _sample_f(self, mu: float, rng: RngStream) -> float:
        # Cauchy(mu, 0.1), regenerated while non-positive, truncated at 1
        while True:
            value = mu + 0.1 * np.tan(np.pi * (rng.uniform() - 0.5))
            if value > 0:
                return min(1.0, value)

    def _target_size(self, n_init: int, budget: Budget) -> int:
        n_min = self.config.min_population
        frac = min(1.0, budget.used_nfe / budget.max_nfe)
        return max(n_min, int(round(n_init + (n_min - n_init) * frac)))

    def _search(self, f: Objective, budget: Budget, rng: RngStream) -> List[float]:
        cfg = self.config
        bounds = f.bounds
        d = bounds.dimension
        n = cfg.population or (18 if self.linear_reduction else 10) * d
        if budget.remaining < n:
            raise ConfigurationError(f"budget of {budget.remaining} evaluations cannot cover {n} individuals")
        n_init = n
        H = cfg.memory_size
        M_cr = np.full(H, 0.5)
        M_f = np.full(H, 0.5)
        k = 0

        pop = bounds.lb + rng.uniform((n, d)) * bounds.width
        fit = budget.evaluate_many(f, pop)
        archive = np.empty((0, d))
        self.population_history = [n]
        self.memory_history = [np.stack([M_cr.copy(), M_f.copy()])]
        iteration_best: List[float] = []

        while not budget.exhausted:
            n = len(pop)
            order = np.argsort(fit, kind="stable")
            S_cr, S_f, S_df = [], [], []
            new_pop, new_fit = pop.copy(), fit.copy()
            replaced = []

            for i in range(n):
                if budget.exhausted:
                    break
                r = rng.integers(0, H)
                cr = float(np.clip(rng.normal(M_cr[r], 0.1), 0.0, 1.0))
                F = self._sample_f(M_f[r], rng)

                p = cfg.pbest_rate if self.linear_reduction else rng.uniform() * (0.2 - 2.0 / n) + 2.0 / n
                n_best = max(2, int(round(p * n)))
                pbest = pop[order[rng.integers(0, n_best)]]

                candidates = np.delete(np.arange(n), i)
                r1 = rng.choice(candidates, 1)[0]
                union = np.vstack([pop, archive]) if len(archive) else pop
                r2_pool = [j for j in range(len(union)) if j != i and j != r1]
                r2 = r2_pool[rng.integers(0, len(r2_pool))]

                mutant = pop[i] + F * (pbest - pop[i]) + F * (pop[r1] - union[r2])
                # out-of-range components go halfway between the parent and the bound
                low = mutant < bounds.lb
                high = mutant > bounds.ub
                mutant[low] = (bounds.lb[low] + pop[i][low]) / 2.0
                mutant[high] = (bounds.ub[high] + pop[i][high]) / 2.0

                mask = rng.uniform(d) < cr
                mask[rng.integers(0, d)] = True
                trial = np.where(mask, mutant, pop[i])

                value = budget.evaluate(f, trial)
                if value <= fit[i]:
                    if value < fit[i]:
                        replaced.append(pop[i].copy())
                        S_cr.append(cr)
                        S_f.append(F)
                        S_df.append(fit[i] - value)
                    new_pop[i], new_fit[i] = trial, value

            pop, fit = new_pop, new_fit

            if replaced:
                archive = np.vstack([archive, np.array(replaced)])
            max_archive = max(1, int(round(cfg.archive_rate * len(pop))))
            if len(archive) > max_archive:
                keep = rng.permutation(len(archive))[:max_archive]
                archive = archive[np.sort(keep)]

            if S_cr:
                w = np.asarray(S_df) / np.sum(S_df)
                s_cr, s_f = np.asarray(S_cr), np.asarray(S_f)
                M_cr[k] = float(np.sum(w * s_cr))
                M_f[k] = float(np.sum(w * s_f ** 2) / np.sum(w * s_f))
                k = (k + 1) % H
            self.memory_history.append(np.stack([M_cr.copy(), M_f.copy()]))

            if self.linear_reduction:
                target = min(len(pop), self._target_size(n_init, budget))
                if target < len(pop):
                    keep = np.sort(np.argsort(fit, kind="stable")[:target])
                    pop, fit = pop[keep], fit[keep]
                    if len(archive) > len(pop):
                        archive = archive[np.sort(rng.permutation(len(archive))[:len(pop)])]
                self.population_history.append(len(pop))

            iteration_best.append(budget.recorder.best)
            logger.debug("%s generation: N=%d best=%.6g", self.algorithm_id, len(pop), budget.recorder.best)
        return iteration_best


def shade_run(f: Objective, cfg: BaselineConfig, budget: Budget, rng: RngStream) -> RunRecord:
    return ShadeOptimizer(cfg).minimize(f, budget, rng)


def lshade_run(f: Objective, cfg: BaselineConfig, budget: Budget, rng: RngStream) -> RunRecord:
    return ShadeOptimizer(cfg, linear_reduction=True).minimize(f, budget, rng)

"""
Basic (mu/mu_w, lambda) CMA-ES baseline.

Rank-one and rank-mu covariance updates with cumulative step-size
adaptation. The eigendecomposition of C is refreshed lazily, only when
enough evaluations have passed since the last one.
"""
import logging
from typing import List, Optional

import numpy as np

from ..core.base_models import BaseOptimizer, Budget, Objective, RunRecord, clip_to_bounds
from ..core.rng import RngStream
from ..errors import ConfigurationError
from .baseline_config import BaselineConfig

logger = logging.getLogger(__name__)


class CmaesParameters:
    """Strategy parameters for dimension N and offspring count lam."""

    def __init__(self, N: int, lam: Optional[int] = None):
        self.N = N
        self.lam = lam or 4 + int(3 * np.log(N))
        self.mu = self.lam // 2
        raw = np.log((self.lam + 1) / 2.0) - np.log(np.arange(1, self.mu + 1))
        self.weights = raw / raw.sum()
        self.mueff = 1.0 / np.sum(self.weights ** 2)

        self.cc = (4 + self.mueff / N) / (N + 4 + 2 * self.mueff / N)
        self.cs = (self.mueff + 2) / (N + self.mueff + 5)
        self.c1 = 2 / ((N + 1.3) ** 2 + self.mueff)
        self.cmu = min(1 - self.c1, 2 * (self.mueff - 2 + 1 / self.mueff) / ((N + 2) ** 2 + self.mueff))
        self.damps = 2 * self.mueff / self.lam + 0.3 + self.cs
        self.chiN = N ** 0.5 * (1 - 1.0 / (4 * N) + 1.0 / (21 * N ** 2))
        self.lazy_gap_evals = 0.5 * N * self.lam / (self.c1 + self.cmu) / N ** 2


class CmaesOptimizer(BaseOptimizer):
    """
    CMA-ES with box handling by resampling.

    Candidates outside the box are redrawn up to `resample_limit` times and
    clipped after that. C is symmetrized after every update; the largest
    asymmetry seen is kept in `max_asymmetry`.
    """
    algorithm_id = "cmaes"

    def __init__(self, config: Optional[BaselineConfig] = None):
        self.config = config or BaselineConfig(algorithm_id="cmaes")
        self.max_asymmetry = 0.0

    def _search(self, f: Objective, budget: Budget, rng: RngStream) -> List[float]:
        bounds = f.bounds
        N = bounds.dimension
        par = CmaesParameters(N, self.config.population)
        if budget.remaining < par.lam:
            raise ConfigurationError(f"budget of {budget.remaining} evaluations cannot cover lambda={par.lam}")

        xmean = bounds.lb + rng.uniform(N) * bounds.width
        sigma = self.config.sigma0_fraction * float(np.mean(bounds.width))
        C = np.eye(N)
        B = np.eye(N)
        Dvec = np.ones(N)
        invsqrtC = np.eye(N)
        pc = np.zeros(N)
        ps = np.zeros(N)
        counteval = 0
        updated_eval = 0
        self.max_asymmetry = 0.0
        iteration_best: List[float] = []

        while budget.remaining >= par.lam:
            arx = np.empty((par.lam, N))
            for k in range(par.lam):
                for _ in range(self.config.resample_limit + 1):
                    x = xmean + sigma * (B @ (Dvec * rng.normal(size=N)))
                    if bounds.contains(x):
                        break
                arx[k] = clip_to_bounds(x, bounds)
            fitvals = budget.evaluate_many(f, arx)
            counteval += par.lam

            arx = arx[np.argsort(fitvals, kind="stable")]
            xold = xmean
            xmean = par.weights @ arx[:par.mu]

            y = xmean - xold
            z = invsqrtC @ y
            ps = (1 - par.cs) * ps + np.sqrt(par.cs * (2 - par.cs) * par.mueff) / sigma * z
            hsig = float(np.sum(ps ** 2) / N / (1 - (1 - par.cs) ** (2 * counteval / par.lam))
                         < 2 + 4.0 / (N + 1))
            pc = (1 - par.cc) * pc + np.sqrt(par.cc * (2 - par.cc) * par.mueff) / sigma * hsig * y

            c1a = par.c1 * (1 - (1 - hsig ** 2) * par.cc * (2 - par.cc))
            dx = (arx[:par.mu] - xold) / sigma
            C = (1 - c1a - par.cmu) * C + par.c1 * np.outer(pc, pc) + par.cmu * (dx.T * par.weights) @ dx
            self.max_asymmetry = max(self.max_asymmetry, float(np.abs(C - C.T).max()))
            C = 0.5 * (C + C.T)

            sigma *= np.exp(min(1.0, (par.cs / par.damps) * (np.sum(ps ** 2) / N - 1) / 2))

            if counteval - updated_eval > par.lazy_gap_evals:
                eigenvalues, B = np.linalg.eigh(C)
                Dvec = np.sqrt(np.maximum(eigenvalues, 1e-300))
                invsqrtC = (B / Dvec) @ B.T
                updated_eval = counteval

            iteration_best.append(budget.recorder.best)
            logger.debug("cmaes generation: sigma=%.3g best=%.6g", sigma, budget.recorder.best)

            # numerically collapsed distribution: nothing more to learn
            if sigma * Dvec.max() < 1e-300 or not np.isfinite(sigma):
                break
        return iteration_best


def cmaes_run(f: Objective, cfg: BaselineConfig, budget: Budget, rng: RngStream) -> RunRecord:
    return CmaesOptimizer(cfg).minimize(f, budget, rng)

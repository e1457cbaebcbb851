"""
Frenetic Cat-inspired Particle Optimization (FCPO).

A PSO core whose particles switch between behavioural states under a
seven-state Markov controller:

- neutral (states 0, 1, 3, 4): inertia-weighted PSO velocity update
- restoration (state 2): damped pull-back toward the personal best
- zoomies (state 5): elite-difference jump, only early in the run
- purr (state 6): Gaussian step shaped by the elite covariance eigensystem

The swarm is initialized by maximin Latin Hypercube sampling and shrunk
linearly (LPSR) from p_init to p_min. Near the end of the run the global
best is polished by an adaptive compass search along the
eigendirections ("Golden State"). The transition matrix is reinforced toward
the state of the global best holder only after a particle move improved it;
restoration damps the PSO proposal back toward the personal best.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import List, NamedTuple, Optional

import numpy as np

from ..core.base_models import BaseOptimizer, Bounds, Budget, Objective, RunRecord, clip_to_bounds
from ..core.linalg import EigenSystem, covariance, eigh
from ..core.rng import RngStream
from ..core.sampling import lhs_maximin
from ..errors import ConfigurationError, ContractViolation
from . import markov

logger = logging.getLogger(__name__)

LOCKDOWN_VMAX_FACTOR = 1e-6
EIGEN_FLOOR = 1e-10


@dataclass
class FcpoConfig:
    """
    FCPO parameters.

    p_init defaults to 10*D and t_max to the largest iteration count whose
    expected evaluation cost fits the budget; `resolve` fills both in.
    """
    p_init: Optional[int] = None
    p_min: int = 4
    t_max: Optional[int] = None
    t_trans: int = 10
    c1: float = 1.49445
    c2: float = 1.49445
    eta: float = 0.2
    stagnation_threshold: int = 10
    zoomies_cutoff_rho: float = 0.9
    lockdown_rho: float = 0.98
    elite_fraction: float = 0.4
    golden_start_rho: float = 0.9
    golden_step: float = 1e-2
    golden_step_min: float = 1e-12
    golden_sweeps: int = 3
    golden_directions: Optional[int] = None
    v_max_fraction: float = 0.2
    lhs_candidates: int = 10
    no_zoom: bool = False
    no_eigen: bool = False
    no_lpsr: bool = False

    def __post_init__(self):
        if self.p_min < 2:
            raise ConfigurationError(f"p_min must be >= 2 (got {self.p_min})")
        if self.p_init is not None and self.p_init < self.p_min:
            raise ConfigurationError(f"p_init ({self.p_init}) must be >= p_min ({self.p_min})")
        if self.t_trans < 1:
            raise ConfigurationError(f"t_trans must be positive (got {self.t_trans})")
        if self.t_max is not None:
            if self.t_max < 1:
                raise ConfigurationError(f"t_max must be positive (got {self.t_max})")
            if self.t_trans > self.t_max:
                raise ConfigurationError(f"t_trans ({self.t_trans}) must not exceed t_max ({self.t_max})")
        for name in ("eta", "elite_fraction", "zoomies_cutoff_rho", "lockdown_rho", "golden_start_rho"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigurationError(f"{name} must lie in [0, 1] (got {value})")
        if not 0.0 < self.golden_step_min <= self.golden_step <= 1.0:
            raise ConfigurationError(
                f"golden steps must satisfy 0 < golden_step_min <= golden_step <= 1 "
                f"(got {self.golden_step_min}, {self.golden_step})"
            )
        if self.golden_sweeps < 1:
            raise ConfigurationError(f"golden_sweeps must be positive (got {self.golden_sweeps})")
        if self.golden_directions is not None and self.golden_directions < 1:
            raise ConfigurationError(f"golden_directions must be positive (got {self.golden_directions})")

    def golden_width(self, dimension: int) -> int:
        """Number of Golden State directions for a problem dimension."""
        return dimension if self.golden_directions is None else min(dimension, self.golden_directions)

    def resolve(self, dimension: int, max_nfe: Optional[int] = None) -> "FcpoConfig":
        """Copy with p_init and t_max made concrete for a problem and budget."""
        cfg = self if self.p_init is not None else replace(self, p_init=max(10 * dimension, self.p_min))
        if cfg.t_max is None:
            if max_nfe is None:
                raise ConfigurationError("t_max is unset and no budget was given to derive it")
            t_max = iterations_for_budget(cfg, dimension, max_nfe)
            cfg = replace(cfg, t_max=t_max, t_trans=min(cfg.t_trans, t_max))
        return cfg


@dataclass
class SwarmState:
    """
    Complete state of one FCPO run. `g_index` is the particle holding Jg.

    `swarm_improved` marks a Jg improvement made by a particle move since the
    last transition step; `golden_steps` holds the per-direction Golden State
    steps relative to the box width.
    """
    bounds: Bounds
    X: np.ndarray
    V: np.ndarray
    Pbest: np.ndarray
    Jbest: np.ndarray
    gbest: np.ndarray
    Jg: float
    g_index: int
    states: np.ndarray
    A: np.ndarray
    eig: Optional[EigenSystem] = None
    no_imp: int = 0
    t: int = 0
    swarm_improved: bool = False
    golden_steps: Optional[np.ndarray] = None

    @property
    def size(self) -> int:
        return self.X.shape[0]

    @property
    def dimension(self) -> int:
        return self.X.shape[1]


@dataclass
class OperatorCounts:
    """Per-run operator usage."""
    neutral: int = 0
    zoomies: int = 0
    purr: int = 0
    restoration: int = 0
    golden_probes: int = 0


class Move(NamedTuple):
    position: np.ndarray
    velocity: np.ndarray


def inertia_weight(rho: float) -> float:
    """Cosine schedule 0.4 + 0.5 cos(pi rho), floored at 0.1."""
    return max(0.1, 0.4 + 0.5 * np.cos(np.pi * rho))


def neutral_update(state: SwarmState, i: int, rho: float, rng: RngStream,
                   cfg: Optional[FcpoConfig] = None) -> Move:
    """
    Standard PSO velocity update with velocity clamp.

    Under terminal lockdown (rho > lockdown_rho) inertia is zero and the
    clamp shrinks by a factor 1e-6.
    """
    cfg = cfg or FcpoConfig()
    x, v = state.X[i], state.V[i]
    v_max = cfg.v_max_fraction * state.bounds.width
    if rho > cfg.lockdown_rho:
        w = 0.0
        v_max = LOCKDOWN_VMAX_FACTOR * v_max
    else:
        w = inertia_weight(rho)
    d = state.dimension
    r1 = rng.uniform(d)
    r2 = rng.uniform(d)
    v_new = w * v + cfg.c1 * r1 * (state.Pbest[i] - x) + cfg.c2 * r2 * (state.gbest - x)
    v_new = np.clip(v_new, -v_max, v_max)
    return Move(clip_to_bounds(x + v_new, state.bounds), v_new)


def elite_set(Jbest: np.ndarray, P: int, elite_fraction: float = 0.4) -> np.ndarray:
    """Indices of the K = max(2, floor(fraction * P)) lowest Jbest, ties to lower index."""
    if P < 2:
        raise ContractViolation(f"elite set needs P >= 2 (got {P})")
    k = min(P, max(2, int(np.floor(elite_fraction * P))))
    order = np.argsort(np.asarray(Jbest)[:P], kind="stable")
    return order[:k]


def zoomies_move(state: SwarmState, i: int, rho: float, rng: RngStream,
                 elites: np.ndarray, F: Optional[float] = None) -> Move:
    """
    Elite-difference jump from the better of two random elites.

    x' = Pbest_a + F (Pbest_a - Pbest_b) with Jbest[a] <= Jbest[b] and a scalar
    F ~ N(0.5, 0.3^2); velocity is reset.
    """
    a, b = rng.choice(elites, 2)
    if state.Jbest[b] < state.Jbest[a]:
        a, b = b, a
    if F is None:
        F = rng.normal(0.5, 0.3)
    x_new = state.Pbest[a] + F * (state.Pbest[a] - state.Pbest[b])
    return Move(clip_to_bounds(x_new, state.bounds), np.zeros(state.dimension))


def purr_move(state: SwarmState, i: int, rho: float, rng: RngStream) -> Move:
    """Gaussian step around Pbest_i shaped by the eigensystem, step size 0.02 (1 - rho)^2."""
    if state.eig is None:
        raise ContractViolation("purr move needs an eigensystem")
    alpha = 0.02 * (1.0 - rho) ** 2
    xi = rng.normal(size=state.dimension)
    scales = state.eig.normalized_scales(EIGEN_FLOOR)
    step = alpha * (state.eig.Q @ (scales * xi)) * state.bounds.width
    return Move(clip_to_bounds(state.Pbest[i] + step, state.bounds), np.zeros(state.dimension))


def restoration_move(state: SwarmState, i: int, proposal: Optional[Move] = None) -> Move:
    """
    Damped pull-back: x' = x + 0.5 (Pbest_i - x), v' = 0.5 v.

    With a `proposal` the pull-back acts on that position and velocity
    instead of the particle's current ones.
    """
    x, v = (state.X[i], state.V[i]) if proposal is None else proposal
    x_new = x + 0.5 * (state.Pbest[i] - x)
    return Move(clip_to_bounds(x_new, state.bounds), 0.5 * v)


def lpsr_target(t: int, cfg: FcpoConfig) -> int:
    """Linear population size at iteration t, rounded half up."""
    if cfg.p_init is None or cfg.t_max is None:
        raise ContractViolation("lpsr_target needs a resolved config")
    if cfg.no_lpsr:
        return cfg.p_init
    raw = cfg.p_init + (cfg.p_min - cfg.p_init) * t / cfg.t_max
    return int(min(cfg.p_init, max(cfg.p_min, np.floor(raw + 0.5))))


def shrink_population(state: SwarmState, target: int, p_min: int = 2) -> SwarmState:
    """
    Drop the worst particles by Jbest until `target` remain.

    Ties remove the higher index first and the global-best holder is never
    removed. Survivors keep their relative order.
    """
    P = state.size
    if target < p_min:
        raise ContractViolation(f"target population {target} is below p_min {p_min}")
    if target > P:
        raise ContractViolation(f"cannot grow the population from {P} to {target}")
    if target == P:
        return state

    ranking = np.lexsort((np.arange(P), state.Jbest))
    keep = list(ranking[:target])
    if state.g_index not in keep:
        keep[-1] = state.g_index
    keep = np.sort(np.array(keep, dtype=int))

    state.X = state.X[keep]
    state.V = state.V[keep]
    state.Pbest = state.Pbest[keep]
    state.Jbest = state.Jbest[keep]
    state.states = state.states[keep]
    state.g_index = int(np.flatnonzero(keep == state.g_index)[0])
    return state


def update_eigensystem(state: SwarmState, cfg: FcpoConfig) -> SwarmState:
    """Recompute the elite Pbest covariance eigensystem while P > D."""
    if cfg.no_eigen or state.size <= state.dimension:
        return state
    elites = elite_set(state.Jbest, state.size, cfg.elite_fraction)
    if elites.size < 2:
        return state
    state.eig = eigh(covariance(state.Pbest[elites]))
    return state


def golden_state_refine(state: SwarmState, f: Objective, rho: float, budget: Budget,
                        cfg: Optional[FcpoConfig] = None,
                        counts: Optional[OperatorCounts] = None) -> SwarmState:
    """
    Adaptive compass search around the global best.

    Directions are the top m eigenvectors q_k (coordinate axes when no
    eigensystem exists), m = D unless golden_directions caps it. Each
    direction keeps its own step, first set to golden_step * s_k, and probes
    gbest +/- step_k * (ub - lb) * q_k. An improving probe is accepted at
    once; a direction that improved doubles its step (at most golden_step),
    one whose two probes both failed halves it (at least golden_step_min).

    One call makes golden_sweeps passes of 2m probes and stops early when the
    budget is exhausted. Steps carry over to the next call.
    """
    cfg = cfg or FcpoConfig()
    d = state.dimension
    m = cfg.golden_width(d)
    if state.eig is not None:
        directions = state.eig.Q[:, :m]
        scales = state.eig.normalized_scales(EIGEN_FLOOR)[:m]
    else:
        directions = np.eye(d)[:, :m]
        scales = np.ones(m)
    if state.golden_steps is None or state.golden_steps.size != m:
        state.golden_steps = np.maximum(cfg.golden_step * scales, cfg.golden_step_min)
    steps = state.golden_steps
    width = state.bounds.width

    for _ in range(cfg.golden_sweeps):
        for k in range(m):
            improved = False
            for sign in (1.0, -1.0):
                if budget.exhausted:
                    return state
                probe = state.gbest + sign * steps[k] * width * directions[:, k]
                probe = clip_to_bounds(probe, state.bounds)
                value = budget.evaluate(f, probe)
                if counts is not None:
                    counts.golden_probes += 1
                if value < state.Jg:
                    g = state.g_index
                    state.gbest = probe
                    state.Jg = value
                    state.Pbest[g] = probe
                    state.Jbest[g] = value
                    state.no_imp = 0
                    improved = True
            if improved:
                steps[k] = min(2.0 * steps[k], cfg.golden_step)
            else:
                steps[k] = max(0.5 * steps[k], cfg.golden_step_min)
    return state


def expected_nfe(cfg: FcpoConfig, dimension: int) -> int:
    """Evaluations used by a full run of a resolved config when the budget never binds."""
    probes_per_iteration = 2 * cfg.golden_sweeps * cfg.golden_width(dimension)
    total = cfg.p_init
    for t in range(1, cfg.t_max + 1):
        total += lpsr_target(t, cfg)
        if t / cfg.t_max >= cfg.golden_start_rho:
            total += probes_per_iteration
    return total


def iterations_for_budget(cfg: FcpoConfig, dimension: int, max_nfe: int) -> int:
    """
    Largest t_max whose expected evaluation count fits max_nfe (at least 1).

    Args:
        cfg: Config; p_init is filled with 10*D if unset
        dimension: Problem dimension
        max_nfe: Evaluation budget

    Returns:
        Iteration count for `FcpoConfig.t_max`
    """
    p_init = cfg.p_init if cfg.p_init is not None else max(10 * dimension, cfg.p_min)
    base = replace(cfg, p_init=p_init, t_max=None)

    def cost(t_max: int) -> int:
        return expected_nfe(replace(base, t_max=t_max, t_trans=min(base.t_trans, t_max)), dimension)

    lo, hi = 1, max(1, max_nfe)
    if cost(lo) > max_nfe:
        return 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if cost(mid) <= max_nfe:
            lo = mid
        else:
            hi = mid - 1
    return lo


class FcpoOptimizer(BaseOptimizer):
    """
    FCPO as a BaseOptimizer.

    After each run `counts` holds operator usage, `population_history`
    the population size of every iteration and `initial_values` the
    objective values of the initial sample.
    """
    algorithm_id = "fcpo"

    def __init__(self, config: Optional[FcpoConfig] = None, algorithm_id: Optional[str] = None):
        self.config = config or FcpoConfig()
        if algorithm_id is not None:
            self.algorithm_id = algorithm_id
        self.counts = OperatorCounts()
        self.population_history: List[int] = []
        self.last_state: Optional[SwarmState] = None
        self.initial_values: Optional[np.ndarray] = None

    def _initialize(self, f: Objective, cfg: FcpoConfig, budget: Budget, rng: RngStream) -> SwarmState:
        bounds = f.bounds
        X = lhs_maximin(cfg.p_init, bounds, rng, cfg.lhs_candidates)
        J = budget.evaluate_many(f, X)
        g = int(np.argmin(J))
        return SwarmState(
            bounds=bounds,
            X=X,
            V=np.zeros_like(X),
            Pbest=X.copy(),
            Jbest=J,
            gbest=X[g].copy(),
            Jg=float(J[g]),
            g_index=g,
            states=rng.integers(0, markov.N_STATES, cfg.p_init),
            A=markov.init_uniform(),
        )

    def _move(self, state: SwarmState, i: int, rho: float, rng: RngStream,
              elites: np.ndarray, cfg: FcpoConfig) -> Move:
        s = state.states[i]
        if s == markov.ZOOMIES_STATE and rho < cfg.zoomies_cutoff_rho and not cfg.no_zoom and elites.size >= 2:
            self.counts.zoomies += 1
            return zoomies_move(state, i, rho, rng, elites)
        if s == markov.PURR_STATE and state.eig is not None:
            self.counts.purr += 1
            return purr_move(state, i, rho, rng)
        proposal = neutral_update(state, i, rho, rng, cfg)
        if s == markov.RESTORATION_STATE:
            self.counts.restoration += 1
            return restoration_move(state, i, proposal)
        self.counts.neutral += 1
        return proposal

    def _search(self, f: Objective, budget: Budget, rng: RngStream) -> List[float]:
        self.counts = OperatorCounts()
        self.population_history = []
        if budget.remaining < (self.config.p_init or max(10 * f.dimension, self.config.p_min)):
            raise ConfigurationError(
                f"budget of {budget.remaining} evaluations cannot cover the initial population"
            )
        cfg = self.config.resolve(f.dimension, budget.remaining)
        state = self._initialize(f, cfg, budget, rng)
        self.initial_values = state.Jbest.copy()
        self.population_history.append(state.size)
        iteration_best: List[float] = []

        for t in range(1, cfg.t_max + 1):
            if budget.exhausted:
                break
            state.t = t
            rho = t / cfg.t_max

            target = min(lpsr_target(t, cfg), state.size)
            shrink_population(state, target, cfg.p_min)
            self.population_history.append(state.size)

            elites = elite_set(state.Jbest, state.size, cfg.elite_fraction)
            for i in range(state.size):
                move = self._move(state, i, rho, rng, elites, cfg)
                state.X[i] = move.position
                state.V[i] = move.velocity

            J = budget.evaluate_many(f, state.X)
            better = J < state.Jbest
            state.Pbest[better] = state.X[better]
            state.Jbest[better] = J[better]
            best = int(np.argmin(state.Jbest))
            if state.Jbest[best] < state.Jg:
                state.g_index = best
                state.gbest = state.Pbest[best].copy()
                state.Jg = float(state.Jbest[best])
                state.no_imp = 0
                state.swarm_improved = True
            else:
                state.no_imp += 1

            if rho >= cfg.golden_start_rho:
                golden_state_refine(state, f, rho, budget, cfg, self.counts)

            if t % cfg.t_trans == 0:
                update_eigensystem(state, cfg)
                A = state.A
                if state.swarm_improved:
                    A = markov.reinforce_best(A, int(state.states[state.g_index]), cfg.eta)
                state.swarm_improved = False
                if state.no_imp > cfg.stagnation_threshold:
                    A = markov.stagnation_bias(A)
                state.A = markov.renormalize_rows(A)
                state.states = markov.sample_states(state.A, state.states, rng)

            iteration_best.append(state.Jg)
            logger.debug("iteration %d/%d: P=%d Jg=%.6g no_imp=%d", t, cfg.t_max, state.size, state.Jg, state.no_imp)

        self.last_state = state
        return iteration_best


def fcpo_run(f: Objective, cfg: FcpoConfig, budget: Budget, rng: RngStream) -> RunRecord:
    """Run FCPO once and return its RunRecord."""
    return FcpoOptimizer(cfg).minimize(f, budget, rng)

"""
Shared domain types: bounds, objectives, evaluation budgets, run records and
the optimizer base class every algorithm implements.
"""
import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from ..errors import ContractViolation
from .rng import RngStream

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Bounds:
    """Box constraints lb <= x <= ub."""
    lb: np.ndarray
    ub: np.ndarray

    def __post_init__(self):
        lb = np.asarray(self.lb, dtype=float).reshape(-1)
        ub = np.asarray(self.ub, dtype=float).reshape(-1)
        if lb.size < 1:
            raise ContractViolation("bounds need at least one dimension")
        if lb.shape != ub.shape:
            raise ContractViolation(f"lb has {lb.size} entries but ub has {ub.size}")
        if not np.all(lb < ub):
            raise ContractViolation("every lower bound must be strictly below its upper bound")
        object.__setattr__(self, "lb", lb)
        object.__setattr__(self, "ub", ub)

    @classmethod
    def uniform(cls, dimension: int, low: float, high: float) -> "Bounds":
        return cls(np.full(dimension, float(low)), np.full(dimension, float(high)))

    @property
    def dimension(self) -> int:
        return self.lb.size

    @property
    def width(self) -> np.ndarray:
        return self.ub - self.lb

    def contains(self, x: np.ndarray) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lb) and np.all(x <= self.ub))


def clip_to_bounds(x: np.ndarray, bounds: Bounds) -> np.ndarray:
    """
    Project x onto the box component-wise.

    Args:
        x: Point (length D) or population (P x D)
        bounds: Box constraints of dimension D

    Returns:
        New array with every component inside [lb, ub]
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != bounds.dimension:
        raise ContractViolation(
            f"dimension mismatch: x has {x.shape[-1]} components, bounds have {bounds.dimension}"
        )
    return np.minimum(bounds.ub, np.maximum(bounds.lb, x))


class Objective(ABC):
    """
    Deterministic black-box objective over a box.

    Subclasses set `bounds` and implement `evaluate`. `thread_safe` declares
    whether concurrent calls on one instance are allowed.
    """
    name: str = "objective"
    thread_safe: bool = False

    def __init__(self, bounds: Bounds, name: Optional[str] = None):
        self.bounds = bounds
        if name is not None:
            self.name = name

    @property
    def dimension(self) -> int:
        return self.bounds.dimension

    @abstractmethod
    def evaluate(self, x: np.ndarray) -> float:
        """Objective value at x."""
        pass

    def __call__(self, x: np.ndarray) -> float:
        return self.evaluate(x)


class FunctionObjective(Objective):
    """Objective backed by a plain callable."""

    def __init__(self, fn: Callable[[np.ndarray], float], bounds: Bounds,
                 name: str = "function", thread_safe: bool = False):
        super().__init__(bounds, name)
        self._fn = fn
        self.thread_safe = thread_safe

    def evaluate(self, x: np.ndarray) -> float:
        return float(self._fn(np.asarray(x, dtype=float)))


class CountingObjective(Objective):
    """Wrapper that counts every call reaching the wrapped objective."""

    def __init__(self, inner: Objective):
        super().__init__(inner.bounds, inner.name)
        self.inner = inner
        self.thread_safe = inner.thread_safe
        self.calls = 0

    def evaluate(self, x: np.ndarray) -> float:
        self.calls += 1
        return self.inner.evaluate(x)


class TraceRecorder:
    """Best-so-far trace: one (nfe, best) pair per strict improvement."""

    def __init__(self):
        self.best = np.inf
        self.best_position: Optional[np.ndarray] = None
        self.events: List[Tuple[int, float]] = []

    def observe(self, nfe: int, value: float, x: Optional[np.ndarray] = None) -> bool:
        if value < self.best:
            self.best = float(value)
            if x is not None:
                self.best_position = np.array(x, dtype=float)
            self.events.append((int(nfe), self.best))
            return True
        return False


@dataclass
class Budget:
    """
    Evaluation budget. Every objective call made through `evaluate` is charged
    exactly once and fed to the trace recorder.
    """
    max_nfe: int
    used_nfe: int = 0
    recorder: TraceRecorder = field(default_factory=TraceRecorder, repr=False)

    def __post_init__(self):
        if self.max_nfe < 1:
            raise ContractViolation(f"max_nfe must be positive (got {self.max_nfe})")

    @property
    def remaining(self) -> int:
        return max(0, self.max_nfe - self.used_nfe)

    @property
    def exhausted(self) -> bool:
        return self.used_nfe >= self.max_nfe

    def evaluate(self, objective: Objective, x: np.ndarray) -> float:
        value = float(objective.evaluate(x))
        self.used_nfe += 1
        self.recorder.observe(self.used_nfe, value, x)
        return value

    def evaluate_many(self, objective: Objective, xs: np.ndarray) -> np.ndarray:
        """Evaluate rows of xs in order."""
        return np.array([self.evaluate(objective, x) for x in xs], dtype=float)


@dataclass
class RunRecord:
    """Outcome of one optimizer run."""
    function_id: str
    dimension: int
    algorithm_id: str
    seed: int
    final_value: float
    nfe: int
    runtime_ms: float
    trace: List[Tuple[int, float]]
    best_position: Optional[np.ndarray] = field(default=None, repr=False)
    iteration_best: List[float] = field(default_factory=list, repr=False)

    CSV_COLUMNS = ("function", "dim", "algorithm", "seed", "final_value", "nfe", "runtime_ms")

    def __post_init__(self):
        if self.trace and self.final_value != self.trace[-1][1]:
            raise ContractViolation("final_value must equal the last trace value")

    def to_row(self) -> Dict[str, Any]:
        """Row of the results CSV."""
        return {
            "function": self.function_id,
            "dim": self.dimension,
            "algorithm": self.algorithm_id,
            "seed": self.seed,
            "final_value": self.final_value,
            "nfe": self.nfe,
            "runtime_ms": self.runtime_ms,
        }

    def trace_events(self, run_id: str) -> List[Dict[str, Any]]:
        """One JSONL object per improvement event."""
        return [{"run_id": run_id, "nfe": nfe, "best": best} for nfe, best in self.trace]

    def run_id(self) -> str:
        return f"{self.function_id}|{self.dimension}|{self.algorithm_id}|{self.seed}"


class BaseOptimizer(ABC):
    """
    Base class for all optimizers.

    Subclasses implement `_search`, which drives the budget and returns the
    per-iteration best-so-far sequence. `minimize` adds timing and assembles
    the RunRecord.
    """
    algorithm_id: str = "base"

    @abstractmethod
    def _search(self, objective: Objective, budget: Budget, rng: RngStream) -> List[float]:
        """Run the search; return best-so-far after each iteration."""
        pass

    def minimize(self, objective: Objective, budget: Budget, rng: RngStream) -> RunRecord:
        """
        Minimize the objective under the given budget.

        Args:
            objective: Objective to minimize
            budget: Fresh evaluation budget (charged by this run)
            rng: Random stream owned by this run

        Returns:
            RunRecord of the run
        """
        start = time.perf_counter()
        iteration_best = self._search(objective, budget, rng)
        runtime_ms = (time.perf_counter() - start) * 1000.0

        recorder = budget.recorder
        record = RunRecord(
            function_id=objective.name,
            dimension=objective.dimension,
            algorithm_id=self.algorithm_id,
            seed=rng.seed,
            final_value=recorder.best,
            nfe=budget.used_nfe,
            runtime_ms=runtime_ms,
            trace=list(recorder.events),
            best_position=recorder.best_position,
            iteration_best=list(iteration_best),
        )
        logger.info(
            "%s on %s (D=%d): best=%.6g after %d evaluations in %.1f ms",
            self.algorithm_id, objective.name, objective.dimension,
            record.final_value, record.nfe, runtime_ms,
        )
        return record

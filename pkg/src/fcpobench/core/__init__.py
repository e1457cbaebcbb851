"""
Core components of fcpobench: domain types, seeding, sampling and linear algebra.
"""

from .base_models import (
    BaseOptimizer,
    Bounds,
    Budget,
    CountingObjective,
    FunctionObjective,
    Objective,
    RunRecord,
    TraceRecorder,
    clip_to_bounds,
)
from .linalg import EigenSystem, covariance, eigh, random_orthogonal
from .rng import RngStream, derive_run_seed
from .sampling import lhs, lhs_maximin

__all__ = [
    "BaseOptimizer",
    "Bounds",
    "Budget",
    "CountingObjective",
    "FunctionObjective",
    "Objective",
    "RunRecord",
    "TraceRecorder",
    "clip_to_bounds",
    "EigenSystem",
    "covariance",
    "eigh",
    "random_orthogonal",
    "RngStream",
    "derive_run_seed",
    "lhs",
    "lhs_maximin",
]

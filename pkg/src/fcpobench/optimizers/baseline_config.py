"""
Configuration shared by the baseline optimizers.
"""
from dataclasses import dataclass
from typing import Optional

from ..errors import ConfigurationError

BASELINE_IDS = ("pso", "shade", "lshade", "cmaes")


@dataclass
class BaselineConfig:
    """
    Baseline optimizer settings.

    `population` is the swarm size for PSO, the (initial) population for
    SHADE/L-SHADE and the offspring count for CMA-ES. When unset each
    algorithm picks its own default: 30 for PSO, 10*D for SHADE, 18*D for
    L-SHADE and 4 + floor(3 ln D) for CMA-ES.
    """
    algorithm_id: str = "pso"
    population: Optional[int] = None

    # PSO
    w_start: float = 0.9
    w_end: float = 0.4
    c1: float = 1.49445
    c2: float = 1.49445
    v_max_fraction: float = 0.2

    # SHADE / L-SHADE
    memory_size: int = 6
    archive_rate: float = 1.0
    pbest_rate: float = 0.11
    min_population: int = 4

    # CMA-ES
    sigma0_fraction: float = 0.3
    resample_limit: int = 10

    def __post_init__(self):
        if self.algorithm_id not in BASELINE_IDS:
            raise ConfigurationError(
                f"unknown baseline '{self.algorithm_id}', expected one of {', '.join(BASELINE_IDS)}"
            )
        if self.population is not None and self.population < 4:
            raise ConfigurationError(f"population must be >= 4 (got {self.population})")
        if self.min_population < 4:
            raise ConfigurationError(f"min_population must be >= 4 (got {self.min_population})")
        for name in ("w_start", "w_end", "pbest_rate", "archive_rate", "v_max_fraction", "sigma0_fraction"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigurationError(f"{name} must lie in [0, 1] (got {value})")
        if self.memory_size < 1:
            raise ConfigurationError(f"memory_size must be positive (got {self.memory_size})")
        if self.resample_limit < 0:
            raise ConfigurationError(f"resample_limit must be >= 0 (got {self.resample_limit})")

"""
Configuration settings for the benchmark harness.
"""
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

from .benchmarks.cases import DIMENSIONS, FUNCTION_IDS, parse_case_id
from .errors import ConfigurationError
from .optimizers.fcpo import FcpoConfig
from .optimizers.registry import ALGORITHM_IDS
from .utils.config_loader import load_config_file, parse_bool, parse_int, parse_list
from .utils.matrix_io import PathLike

DEFAULT_ALGORITHMS = ["fcpo", "pso", "shade", "lshade", "cmaes"]
DEFAULT_CASES = [f"{f}-{d}" for f in FUNCTION_IDS for d in DIMENSIONS]
MIN_BUDGET = 100

# config-file key -> HarnessConfig field
FILE_KEYS = {
    "seed": "master_seed",
    "runs": "n_runs",
    "budget_per_dim": "budget_per_dim",
    "budget": "budget",
    "algos": "algorithms",
    "cases": "cases",
    "no_zoom": "no_zoom",
    "no_eigen": "no_eigen",
    "no_lpsr": "no_lpsr",
    "parallel": "parallel",
    "out": "out",
    "record_runtime": "record_runtime",
}


@dataclass
class HarnessConfig:
    """Configuration of a benchmark matrix."""

    master_seed: int = 2024
    n_runs: int = 30
    # per-run budget is `budget` when set, else budget_per_dim * D
    budget_per_dim: int = 1000
    budget: Optional[int] = None
    algorithms: List[str] = field(default_factory=lambda: list(DEFAULT_ALGORITHMS))
    cases: List[str] = field(default_factory=lambda: list(DEFAULT_CASES))

    # Ablation switches applied to every FCPO variant
    no_zoom: bool = False
    no_eigen: bool = False
    no_lpsr: bool = False

    parallel: int = 1
    out: str = "results"
    # False writes runtime_ms as 0 so results.csv depends only on the seeds
    record_runtime: bool = True
    fcpo_p_init: Optional[int] = None  # None: 10*D

    def __post_init__(self):
        """Validate configuration."""
        if self.n_runs < 1:
            raise ConfigurationError(f"n_runs must be >= 1 (got {self.n_runs})")
        if self.budget is not None and self.budget < MIN_BUDGET:
            raise ConfigurationError(f"budget must be >= {MIN_BUDGET} (got {self.budget})")
        if self.budget_per_dim * min(DIMENSIONS) < MIN_BUDGET:
            raise ConfigurationError(f"budget_per_dim too small (got {self.budget_per_dim})")
        if self.parallel < 1:
            raise ConfigurationError(f"parallel must be >= 1 (got {self.parallel})")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ConfigurationError(f"master_seed must be an unsigned 64-bit integer (got {self.master_seed})")
        if not self.algorithms:
            raise ConfigurationError("at least one algorithm is required")
        unknown = [a for a in self.algorithms if a not in ALGORITHM_IDS]
        if unknown:
            raise ConfigurationError(
                f"unknown algorithm(s) {', '.join(unknown)}; expected {', '.join(ALGORITHM_IDS)}"
            )
        self.cases = self._expand_cases(self.cases)

    @staticmethod
    def _expand_cases(cases: List[str]) -> List[str]:
        if not cases:
            raise ConfigurationError("at least one case is required")
        if any(c.strip().lower() == "all" for c in cases):
            return list(DEFAULT_CASES)
        normalized = []
        for case_id in cases:
            fid, dim = parse_case_id(case_id)
            if fid not in FUNCTION_IDS or dim not in DIMENSIONS:
                raise ConfigurationError(f"unknown case '{case_id}'; expected one of {', '.join(DEFAULT_CASES)}")
            normalized.append(f"{fid}-{dim}")
        return normalized

    def budget_for(self, dimension: int) -> int:
        return self.budget if self.budget is not None else self.budget_per_dim * dimension

    def fcpo_config(self) -> FcpoConfig:
        """Base FCPO config for the harness; ablation ids add their own flag on top."""
        return FcpoConfig(
            p_init=self.fcpo_p_init,
            no_zoom=self.no_zoom,
            no_eigen=self.no_eigen,
            no_lpsr=self.no_lpsr,
        )

    @property
    def out_dir(self) -> Path:
        return Path(self.out)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_file(cls, path: PathLike, **overrides: Any) -> "HarnessConfig":
        """
        Load a key=value config file; keyword overrides (field names) win over file values.

        Args:
            path: Config file, see fcpobench.utils.config_loader
            **overrides: HarnessConfig fields, e.g. from CLI flags; None values are ignored

        Returns:
            HarnessConfig
        """
        raw = load_config_file(path, FILE_KEYS)
        values: Dict[str, Any] = {}
        for key, text in raw.items():
            name = FILE_KEYS[key]
            if name in ("algorithms", "cases"):
                values[name] = parse_list(text)
            elif name in ("no_zoom", "no_eigen", "no_lpsr", "record_runtime"):
                values[name] = parse_bool(key, text)
            elif name == "out":
                values[name] = text.strip()
            else:
                values[name] = parse_int(key, text)
        return cls.from_overrides(values, **overrides)

    @classmethod
    def from_overrides(cls, base: Optional[Dict[str, Any]] = None, **overrides: Any) -> "HarnessConfig":
        known = {f.name for f in fields(cls)}
        values = dict(base or {})
        for name, value in overrides.items():
            if name not in known:
                raise ConfigurationError(f"unknown harness setting '{name}'")
            if value is not None:
                values[name] = value
        return cls(**values)

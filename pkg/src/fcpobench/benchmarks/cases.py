"""
CEC-2022-style benchmark instances built from seeded synthetic transforms.

Supported cases: F1 (Zakharov), F2 (Rosenbrock), F3 (expanded Schaffer F7),
F6 (hybrid: bent cigar, HGBat, Rastrigin) and F10 (composition: modified
Schwefel, Rastrigin, HGBat), each at D = 10 or 20 on [-100, 100]^D.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..core.base_models import Bounds, Objective
from ..core.linalg import random_orthogonal
from ..core.rng import RngStream, derive_run_seed
from ..errors import ConfigurationError
from .functions import bent_cigar, hgbat, rastrigin, rosenbrock, schaffer_f7_expanded, schwefel_mod, zakharov

FUNCTION_IDS = ("F1", "F2", "F3", "F6", "F10")
DIMENSIONS = (10, 20)
BIASES = {"F1": 300.0, "F2": 400.0, "F3": 600.0, "F6": 1800.0, "F10": 2500.0}
BOUND = 100.0

ROSENBROCK_SCALE = 2.048 / 100.0
SCHAFFER_SCALE = 0.005
HGBAT_SCALE = 0.05
RASTRIGIN_SCALE = 0.0512
SCHWEFEL_SCALE = 10.0

HYBRID_PROPORTIONS = (0.4, 0.4)
COMPOSITION_SIGMAS = (20.0, 10.0, 10.0)
COMPOSITION_LAMBDAS = (1.0, 1.0, 1.0)
COMPOSITION_BIASES = (0.0, 200.0, 100.0)


@dataclass
class TransformData:
    """Shift o, rotation M, coordinate permutation (0-based) and bias of one instance."""
    o: np.ndarray
    M: np.ndarray
    bias: float
    seed: int
    perm: Optional[np.ndarray] = None

    @classmethod
    def generate(cls, dimension: int, seed: int, bias: float, bounds: Bounds,
                 with_perm: bool = False) -> "TransformData":
        """Shift uniform in the central 80% of the box, then rotation, then permutation."""
        rng = RngStream(seed)
        o = bounds.lb + bounds.width * (0.1 + 0.8 * rng.uniform(dimension))
        M = random_orthogonal(dimension, rng)
        perm = rng.permutation(dimension) if with_perm else None
        return cls(o=o, M=M, bias=float(bias), seed=seed, perm=perm)

    def shift_rotate(self, x: np.ndarray, scale: float = 1.0) -> np.ndarray:
        """M (scale (x - o))."""
        return self.M @ (scale * (x - self.o))


def hybrid_partition(dimension: int) -> Tuple[int, int, int]:
    """Part sizes ceil(0.4 D), ceil(0.4 D) and the remainder."""
    first = int(np.ceil(HYBRID_PROPORTIONS[0] * dimension))
    second = int(np.ceil(HYBRID_PROPORTIONS[1] * dimension))
    return first, second, dimension - first - second


@dataclass
class BenchmarkCase(Objective):
    """One benchmark instance; callable as an Objective."""
    function_id: str
    D: int
    instance_seed: int
    transforms: List[TransformData] = field(repr=False)
    bounds: Bounds = field(repr=False, default=None)
    thread_safe: bool = True

    def __post_init__(self):
        if self.bounds is None:
            self.bounds = Bounds.uniform(self.D, -BOUND, BOUND)
        self.name = self.function_id

    @property
    def known_optimum(self) -> float:
        return BIASES[self.function_id]

    @property
    def case_id(self) -> str:
        return f"{self.function_id}-{self.D}"

    def error(self, value: float) -> float:
        return value - self.known_optimum

    def evaluate(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        if self.function_id in ("F1", "F2", "F3"):
            return eval_f1_f2_f3(self, x)
        if self.function_id == "F6":
            return eval_hybrid_f6(self, x)
        return eval_composition_f10(self, x)


def eval_f1_f2_f3(case: BenchmarkCase, x: np.ndarray) -> float:
    t = case.transforms[0]
    if case.function_id == "F1":
        return zakharov(t.shift_rotate(x)) + t.bias
    if case.function_id == "F2":
        return rosenbrock(t.shift_rotate(x, ROSENBROCK_SCALE) + 1.0) + t.bias
    if case.function_id == "F3":
        return schaffer_f7_expanded(t.shift_rotate(x, SCHAFFER_SCALE)) + t.bias
    raise ConfigurationError(f"{case.function_id} is not a shifted-rotated basic case")


def eval_hybrid_f6(case: BenchmarkCase, x: np.ndarray) -> float:
    """Rotate, permute, split 40/40/20 and sum bent cigar, HGBat and Rastrigin."""
    t = case.transforms[0]
    y = t.shift_rotate(x)[t.perm]
    n1, n2, _ = hybrid_partition(case.D)
    return (
        bent_cigar(y[:n1])
        + hgbat(HGBAT_SCALE * y[n1:n1 + n2])
        + rastrigin(RASTRIGIN_SCALE * y[n1 + n2:])
        + t.bias
    )


def composition_weights(x: np.ndarray, shifts: List[np.ndarray], sigmas=COMPOSITION_SIGMAS) -> np.ndarray:
    """
    Normalized composition weights.

    w_i = exp(-|x - o_i|^2 / (2 D sigma_i^2)) / |x - o_i|; an exact hit on
    some o_i gives that component weight 1 and the others 0.
    """
    d = x.size
    sq = np.array([np.sum((x - o) ** 2) for o in shifts])
    hits = sq == 0.0
    if np.any(hits):
        w = np.zeros(len(shifts))
        w[np.argmax(hits)] = 1.0
        return w
    w = np.exp(-sq / (2.0 * d * np.asarray(sigmas) ** 2)) / np.sqrt(sq)
    total = w.sum()
    if total == 0.0:
        # far from every optimum all weights underflow
        return np.full(len(shifts), 1.0 / len(shifts))
    return w / total


def eval_composition_f10(case: BenchmarkCase, x: np.ndarray) -> float:
    schwefel_t, rastrigin_t, hgbat_t = case.transforms
    g = np.array([
        COMPOSITION_LAMBDAS[0] * schwefel_mod(schwefel_t.shift_rotate(x, SCHWEFEL_SCALE)),
        COMPOSITION_LAMBDAS[1] * rastrigin(rastrigin_t.shift_rotate(x, RASTRIGIN_SCALE)),
        COMPOSITION_LAMBDAS[2] * hgbat(hgbat_t.shift_rotate(x, HGBAT_SCALE)),
    ])
    omega = composition_weights(x, [t.o for t in case.transforms])
    return float(np.sum(omega * (g + np.asarray(COMPOSITION_BIASES)))) + BIASES["F10"]


def make_case(function_id: str, D: int, instance_seed: int) -> BenchmarkCase:
    """
    Build a deterministic benchmark instance.

    Args:
        function_id: One of F1, F2, F3, F6, F10
        D: 10 or 20
        instance_seed: Seed of the synthetic transforms

    Returns:
        BenchmarkCase
    """
    if function_id not in FUNCTION_IDS:
        raise ConfigurationError(f"unsupported function '{function_id}', expected one of {', '.join(FUNCTION_IDS)}")
    if D not in DIMENSIONS:
        raise ConfigurationError(f"unsupported dimension {D}, expected 10 or 20")
    bounds = Bounds.uniform(D, -BOUND, BOUND)
    if function_id == "F10":
        transforms = [
            TransformData.generate(D, derive_run_seed(instance_seed, i), COMPOSITION_BIASES[i], bounds)
            for i in range(3)
        ]
    else:
        transforms = [TransformData.generate(D, instance_seed, BIASES[function_id], bounds,
                                             with_perm=function_id == "F6")]
    return BenchmarkCase(function_id=function_id, D=D, instance_seed=instance_seed,
                         transforms=transforms, bounds=bounds)


def parse_case_id(case_id: str) -> Tuple[str, int]:
    """'F6-20' -> ('F6', 20)."""
    try:
        fid, dim = case_id.strip().upper().split("-")
        return fid, int(dim)
    except ValueError:
        raise ConfigurationError(f"malformed case id '{case_id}', expected e.g. F1-10") from None


def suite(master_seed: int) -> List[BenchmarkCase]:
    """All ten cases {F1, F2, F3, F6, F10} x {10, 20}."""
    cases = []
    for index, (fid, dim) in enumerate((f, d) for f in FUNCTION_IDS for d in DIMENSIONS):
        cases.append(make_case(fid, dim, derive_run_seed(master_seed, index)))
    return cases

"""
Deterministic random streams and per-run seed derivation.

Every stochastic component receives an explicit RngStream; nothing in the
package touches global random state.
"""
from typing import Optional, Sequence, Union

import numpy as np

from ..errors import ContractViolation

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """SplitMix64 finalizer: a bijection on 64-bit integers."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_run_seed(master_seed: int, run_index: int) -> int:
    """
    Derive the seed of one run from a master seed.

    The run index is spread by an odd multiplier (a bijection modulo 2**64)
    and XOR-ed into the master seed before avalanche mixing, so the mapping is
    injective over run_index for a fixed master seed.

    Args:
        master_seed: Master seed of the experiment (any integer, taken mod 2**64)
        run_index: Non-negative run index

    Returns:
        64-bit unsigned seed
    """
    if run_index < 0:
        raise ContractViolation(f"run_index must be >= 0 (got {run_index})")
    spread = ((run_index + 1) * _GOLDEN_GAMMA) & _MASK64
    return _mix64((master_seed & _MASK64) ^ spread)


class RngStream:
    """
    Reproducible random stream.

    Uniform integers and reals come from numpy's PCG64 bit generator.
    Standard normals use the Box-Muller transform of two uniforms,
    z = sqrt(-2 ln(1 - u1)) * cos(2 pi u2), so streams are portable across
    numpy versions that keep PCG64 and `random()` stable.
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def spawn(self, index: int) -> "RngStream":
        """Child stream with a seed derived from this stream's seed."""
        return RngStream(derive_run_seed(self.seed, index))

    def integers64(self, size: Optional[int] = None) -> Union[int, np.ndarray]:
        """Uniform unsigned 64-bit integers."""
        out = self._gen.integers(0, 2**64, size=size, dtype=np.uint64, endpoint=False)
        return int(out) if size is None else out

    def integers(self, low: int, high: int, size: Optional[int] = None):
        """Uniform integers in [low, high)."""
        out = self._gen.integers(low, high, size=size)
        return int(out) if size is None else out

    def uniform(self, size=None) -> Union[float, np.ndarray]:
        """Uniform reals in [0, 1)."""
        out = self._gen.random(size)
        return float(out) if size is None else out

    def normal(self, loc: float = 0.0, scale: float = 1.0, size=None) -> Union[float, np.ndarray]:
        """Normal variates via Box-Muller."""
        shape = () if size is None else (size if isinstance(size, tuple) else (int(size),))
        n = int(np.prod(shape)) if shape else 1
        n_pairs = (n + 1) // 2
        u1 = self._gen.random(n_pairs)
        u2 = self._gen.random(n_pairs)
        radius = np.sqrt(-2.0 * np.log1p(-u1))
        angle = 2.0 * np.pi * u2
        z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:n]
        z = loc + scale * z
        if size is None:
            return float(z[0])
        return z.reshape(shape)

    def choice(self, population: Sequence[int], k: int) -> np.ndarray:
        """k distinct elements of population, order randomized."""
        population = np.asarray(population)
        if k > len(population):
            raise ContractViolation(f"cannot choose {k} of {len(population)} elements")
        idx = self._gen.permutation(len(population))[:k]
        return population[idx]

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

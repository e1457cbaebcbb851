"""
Seven-state Markov switching controller.

States 0, 1, 3 and 4 are neutral, 2 is restoration, 5 is the exploratory
jump and 6 is eigen-aligned refinement. All updates return new matrices.
"""
import numpy as np

from ..core.rng import RngStream
from ..errors import ContractViolation

N_STATES = 7
NEUTRAL_STATES = (0, 1, 3, 4)
RESTORATION_STATE = 2
ZOOMIES_STATE = 5
PURR_STATE = 6
STAGNATION_BOOST = 0.4


def init_uniform() -> np.ndarray:
    return np.full((N_STATES, N_STATES), 1.0 / N_STATES)


def reinforce_best(A: np.ndarray, s_star: int, eta: float = 0.2) -> np.ndarray:
    """Pull column s_star toward 1: A[:, s*] <- (1 - eta) A[:, s*] + eta."""
    if not 0 <= s_star < N_STATES:
        raise ContractViolation(f"state index out of range: {s_star}")
    out = np.array(A, dtype=float)
    out[:, s_star] = (1.0 - eta) * out[:, s_star] + eta
    return out


def stagnation_bias(A: np.ndarray, boost: float = STAGNATION_BOOST) -> np.ndarray:
    out = np.array(A, dtype=float)
    out[:, ZOOMIES_STATE] += boost
    return out


def renormalize_rows(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    sums = A.sum(axis=1, keepdims=True)
    if np.any(sums <= 0):
        raise ContractViolation("cannot renormalize a row with non-positive sum")
    return A / sums


def sample_states(A: np.ndarray, current: np.ndarray, rng: RngStream) -> np.ndarray:
    """
    Draw the next state of every particle from the row of its current state.

    Inverse CDF on one uniform per particle; the first state whose cumulative
    probability exceeds the draw wins.

    Args:
        A: Row-stochastic 7x7 matrix
        current: Current state per particle
        rng: Random stream

    Returns:
        Next state per particle
    """
    current = np.asarray(current, dtype=int)
    cdf = np.cumsum(A, axis=1)
    u = rng.uniform(current.size)
    nxt = np.empty(current.size, dtype=int)
    for i, (s, ui) in enumerate(zip(current, u)):
        nxt[i] = np.searchsorted(cdf[s], ui, side="right")
    # rounding can leave the last cumulative value a hair below 1
    return np.minimum(nxt, N_STATES - 1)

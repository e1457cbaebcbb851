"""
Latin Hypercube initialization with maximin selection over candidate designs.
"""
from typing import List, Optional

import numpy as np
from sklearn.metrics import pairwise_distances

from ..errors import ContractViolation
from .base_models import Bounds
from .rng import RngStream


def lhs(n: int, bounds: Bounds, rng: RngStream) -> np.ndarray:
    """
    Latin Hypercube design.

    Each column places one point uniformly at random inside each of the n
    equal strata, with the strata order shuffled independently per column.

    Args:
        n: Number of points
        bounds: Box to fill
        rng: Random stream

    Returns:
        n x D array of in-bounds points
    """
    if n < 1:
        raise ContractViolation(f"lhs needs n >= 1 (got {n})")
    d = bounds.dimension
    unit = np.empty((n, d))
    for j in range(d):
        strata = rng.permutation(n)
        unit[:, j] = (strata + rng.uniform(n)) / n
    points = bounds.lb + unit * bounds.width
    # (k + u)/n can round up to 1.0 in floating point
    return np.minimum(points, bounds.ub)


def min_pairwise_distance(points: np.ndarray) -> float:
    """Smallest Euclidean distance between two distinct rows (inf for n=1)."""
    if len(points) < 2:
        return np.inf
    dist = pairwise_distances(points)
    np.fill_diagonal(dist, np.inf)
    return float(dist.min())


def lhs_maximin(
    n: int,
    bounds: Bounds,
    rng: RngStream,
    n_candidates: int = 10,
    keep_candidates: Optional[List[np.ndarray]] = None,
) -> np.ndarray:
    """
    Best of several LHS designs under the maximin criterion.

    Args:
        n: Number of points
        bounds: Box to fill
        rng: Random stream
        n_candidates: Number of independent LHS designs to compare
        keep_candidates: If a list is given, every candidate design is appended
            to it (used to verify maximin dominance)

    Returns:
        The candidate with the largest minimum pairwise distance; ties go to
        the first candidate drawn
    """
    if n_candidates < 1:
        raise ContractViolation(f"n_candidates must be >= 1 (got {n_candidates})")
    best, best_score = None, -np.inf
    for _ in range(n_candidates):
        design = lhs(n, bounds, rng)
        if keep_candidates is not None:
            keep_candidates.append(design)
        score = min_pairwise_distance(design)
        if best is None or score > best_score:
            best, best_score = design, score
    return best

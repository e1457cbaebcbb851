"""
Nonparametric comparison of optimizer results.

Kruskal-Wallis omnibus test, Dunn post-hoc against a control with Holm
correction, Cliff's delta effect size, per-case rank tables and the
Friedman test on case-level ranks. All ties get mid-ranks.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy import stats
from statsmodels.stats.multitest import multipletests

from ..errors import ContractViolation, InsufficientSamplesError

CLIFF_THRESHOLDS = ((0.147, "negligible"), (0.33, "small"), (0.474, "medium"))


@dataclass
class SampleGroup:
    """Final values of one algorithm on one case."""
    label: str
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).reshape(-1)
        if self.values.size == 0:
            raise InsufficientSamplesError(f"group '{self.label}' is empty")
        if not np.all(np.isfinite(self.values)):
            raise ContractViolation(f"group '{self.label}' holds non-finite values")


@dataclass
class TestReport:
    """Test statistic with its p-value and degrees of freedom."""
    statistic: float
    p_value: float
    df: int
    metadata: Dict[str, float] = field(default_factory=dict)

    __test__ = False  # keep pytest from collecting this class


@dataclass
class DunnRow:
    label: str
    z: float
    p_raw: float
    p_adjusted: float


def _check_groups(groups: Sequence[SampleGroup]) -> None:
    if len(groups) < 2:
        raise InsufficientSamplesError("at least two groups are needed")
    for g in groups:
        if g.values.size < 2:
            raise InsufficientSamplesError(f"group '{g.label}' needs at least two values")


def _tie_sum(ranked: np.ndarray) -> float:
    """Sum of t^3 - t over tie blocks."""
    _, counts = np.unique(ranked, return_counts=True)
    counts = counts.astype(float)
    return float(np.sum(counts ** 3 - counts))


def _pooled_ranks(groups: Sequence[SampleGroup]) -> Tuple[np.ndarray, List[np.ndarray]]:
    pooled = np.concatenate([g.values for g in groups])
    ranks = stats.rankdata(pooled)
    split = np.cumsum([g.values.size for g in groups])[:-1]
    return pooled, np.split(ranks, split)


def kruskal_wallis(groups: Sequence[SampleGroup]) -> TestReport:
    """
    Kruskal-Wallis H with tie correction; p from chi-square with k - 1 df.

    Args:
        groups: At least two groups of at least two values

    Returns:
        TestReport with H as statistic
    """
    _check_groups(groups)
    pooled, ranks = _pooled_ranks(groups)
    n = pooled.size
    k = len(groups)
    mean_rank = (n + 1) / 2.0
    h = 12.0 / (n * (n + 1)) * sum(r.size * (r.mean() - mean_rank) ** 2 for r in ranks)
    correction = stats.tiecorrect(stats.rankdata(pooled))
    if correction == 0.0:
        return TestReport(statistic=0.0, p_value=1.0, df=k - 1)
    h /= correction
    p = float(stats.chi2.sf(h, k - 1))
    return TestReport(statistic=float(h), p_value=min(1.0, max(0.0, p)), df=k - 1)


def dunn_holm(groups: Sequence[SampleGroup], control_label: str) -> List[DunnRow]:
    """
    Dunn's test of every group against the control, Holm-adjusted.

    z = (mean rank of other - mean rank of control) / se with
    se^2 = (N(N+1)/12 - sum(t^3 - t) / (12 (N - 1))) (1/n_i + 1/n_c).
    Negative z means the other group ranks lower (better) than the control.

    Args:
        groups: Groups including the control
        control_label: Label of the control group

    Returns:
        One row per non-control group, in input order
    """
    _check_groups(groups)
    labels = [g.label for g in groups]
    if control_label not in labels:
        raise ContractViolation(f"control '{control_label}' is not among the groups")
    pooled, ranks = _pooled_ranks(groups)
    n = pooled.size
    variance = n * (n + 1) / 12.0 - _tie_sum(pooled) / (12.0 * (n - 1))

    c = labels.index(control_label)
    rows: List[DunnRow] = []
    for i, g in enumerate(groups):
        if i == c:
            continue
        se = np.sqrt(max(variance, 0.0) * (1.0 / ranks[i].size + 1.0 / ranks[c].size))
        diff = ranks[i].mean() - ranks[c].mean()
        z = 0.0 if se == 0.0 else diff / se
        p = float(min(1.0, 2.0 * stats.norm.sf(abs(z))))
        rows.append(DunnRow(label=g.label, z=float(z), p_raw=p, p_adjusted=p))

    if rows:
        adjusted = holm_adjust([r.p_raw for r in rows])
        for row, p_adj in zip(rows, adjusted):
            row.p_adjusted = float(p_adj)
    return rows


def holm_adjust(p_values: Sequence[float]) -> np.ndarray:
    """Holm step-down adjusted p-values in input order, capped at 1."""
    _, adjusted, _, _ = multipletests(np.asarray(p_values, dtype=float), method="holm")
    return np.minimum(adjusted, 1.0)


def cliffs_delta(a: Sequence[float], b: Sequence[float]) -> float:
    """(#{a_i > b_j} - #{a_i < b_j}) / (|a| |b|), exact."""
    a = np.asarray(a, dtype=float).reshape(-1, 1)
    b = np.asarray(b, dtype=float).reshape(1, -1)
    if a.size == 0 or b.size == 0:
        raise InsufficientSamplesError("Cliff's delta needs two non-empty samples")
    greater = int(np.count_nonzero(a > b))
    less = int(np.count_nonzero(a < b))
    return (greater - less) / (a.size * b.size)


def cliffs_delta_magnitude(delta: float) -> str:
    magnitude = abs(delta)
    for threshold, label in CLIFF_THRESHOLDS:
        if magnitude < threshold:
            return label
    return "large"


def rank_table(case_medians: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Rank algorithms within each case (rank 1 = lowest median).

    Args:
        case_medians: cases x algorithms matrix of medians

    Returns:
        (per-case ranks, average rank per algorithm)
    """
    medians = np.atleast_2d(np.asarray(case_medians, dtype=float))
    if not np.all(np.isfinite(medians)):
        raise ContractViolation("rank table needs finite medians")
    ranks = np.vstack([stats.rankdata(row) for row in medians])
    return ranks, ranks.mean(axis=0)


def friedman(per_case_ranks: np.ndarray) -> TestReport:
    """Friedman chi-square on an n cases x k algorithms rank matrix."""
    ranks = np.atleast_2d(np.asarray(per_case_ranks, dtype=float))
    n, k = ranks.shape
    if n < 2 or k < 2:
        raise InsufficientSamplesError(f"Friedman needs n >= 2 cases and k >= 2 algorithms (got {n}x{k})")
    rank_sums = ranks.sum(axis=0)
    chi2 = 12.0 / (n * k * (k + 1)) * np.sum(rank_sums ** 2) - 3.0 * n * (k + 1)
    chi2 = max(0.0, float(chi2))
    p = float(stats.chi2.sf(chi2, k - 1))
    return TestReport(statistic=chi2, p_value=min(1.0, max(0.0, p)), df=k - 1)


def describe(values: Sequence[float]) -> Dict[str, float]:
    """Mean, sample standard deviation, median, min and max."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise InsufficientSamplesError("describe needs at least one value")
    return {
        "mean": float(v.mean()),
        "std": float(v.std(ddof=1)) if v.size > 1 else 0.0,
        "median": float(np.median(v)),
        "min": float(v.min()),
        "max": float(v.max()),
    }

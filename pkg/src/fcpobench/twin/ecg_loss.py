"""
Aligned L2 loss between a target and a simulated multi-lead ECG.

One time shift, scale and offset is shared by all leads. Each lead proposes
a shift from its dominant peaks and a scale/offset fitted on that lead; the
proposal with the lowest total loss over all leads wins.
"""
from typing import NamedTuple, Tuple

import numpy as np

from ..errors import ContractViolation
from .forward import EcgSignal


class Alignment(NamedTuple):
    """Total loss and the shared (shift, scale, offset) that achieves it."""
    loss: float
    delta: int
    scale: float
    offset: float


def peak_time(lead: np.ndarray) -> int:
    """Index of the largest squared value, earliest on ties."""
    lead = np.asarray(lead, dtype=float)
    if lead.size == 0:
        raise ContractViolation("peak_time needs a non-empty lead")
    return int(np.argmax(lead * lead))


def fit_scale_offset(target: np.ndarray, sim: np.ndarray,
                     sample_period: float = 1.0) -> Tuple[float, float, float]:
    """
    Least-squares fit target ~ s * sim + r.

    A constant sim gives s = 0 and r = mean(target).

    Returns:
        (s, r, residual) with residual the summed squared error times sample_period
    """
    target = np.asarray(target, dtype=float)
    sim = np.asarray(sim, dtype=float)
    if target.shape != sim.shape or target.size < 2:
        raise ContractViolation("fit needs two equal-length windows of at least 2 samples")
    sim_mean = sim.mean()
    target_mean = target.mean()
    dsim = sim - sim_mean
    var = float(np.dot(dsim, dsim))
    if var == 0.0:
        s = 0.0
    else:
        s = float(np.dot(dsim, target - target_mean) / var)
    r = float(target_mean - s * sim_mean)
    resid = target - (s * sim + r)
    return s, r, float(np.dot(resid, resid) * sample_period)


def _overlap(delta: int, n_target: int, n_sim: int) -> Tuple[int, int]:
    """Sim sample range [lo, hi) for which target index t + delta exists."""
    return max(0, -delta), min(n_sim, n_target - delta)


def shifted_loss(target: EcgSignal, sim: EcgSignal, delta: int, s: float, r: float) -> float:
    """Sum over leads of the squared error of target(t + delta) - (s sim(t) + r)."""
    lo, hi = _overlap(delta, target.n_samples, sim.n_samples)
    if hi - lo < 2:
        return np.inf
    resid = target.leads[:, lo + delta:hi + delta] - (s * sim.leads[:, lo:hi] + r)
    return float(np.sum(resid * resid) * sim.sample_period)


def align_and_loss(target: EcgSignal, sim: EcgSignal) -> Alignment:
    """
    Best shared (shift, scale, offset) among the per-lead proposals.

    Args:
        target: Target ECG
        sim: Simulated ECG with the same leads and sample period

    Returns:
        Alignment with the total loss and its tuple; the shift is in samples
    """
    if target.n_leads != sim.n_leads:
        raise ContractViolation(f"lead counts differ: {target.n_leads} vs {sim.n_leads}")
    if target.sample_period != sim.sample_period:
        raise ContractViolation("sample periods differ")

    best = Alignment(loss=np.inf, delta=0, scale=1.0, offset=0.0)
    for l in range(target.n_leads):
        delta = peak_time(target.leads[l]) - peak_time(sim.leads[l])
        lo, hi = _overlap(delta, target.n_samples, sim.n_samples)
        if hi - lo < 2:
            continue
        s, r, _ = fit_scale_offset(target.leads[l, lo + delta:hi + delta], sim.leads[l, lo:hi], sim.sample_period)
        loss = shifted_loss(target, sim, delta, s, r)
        if loss < best.loss:
            best = Alignment(loss=loss, delta=delta, scale=s, offset=r)
    return best

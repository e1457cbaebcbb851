"""
Activation-site calibration toy: graph-eikonal forward model, pseudo-ECG
synthesis, aligned ECG loss and FCPO-driven calibration.
"""

from .calibration import (
    TwinConfig,
    TwinObjective,
    TwinProblem,
    activation_std,
    calibrate,
    make_problem,
    simulate,
    site_bounds,
)
from .ecg_loss import Alignment, align_and_loss, fit_scale_offset, peak_time, shifted_loss
from .forward import EcgSignal, GridGraph, LeadField, PmjConfig, activation_map, gaussian_derivative, pseudo_ecg

__all__ = [
    "TwinConfig",
    "TwinObjective",
    "TwinProblem",
    "activation_std",
    "calibrate",
    "make_problem",
    "simulate",
    "site_bounds",
    "Alignment",
    "align_and_loss",
    "fit_scale_offset",
    "peak_time",
    "shifted_loss",
    "EcgSignal",
    "GridGraph",
    "LeadField",
    "PmjConfig",
    "activation_map",
    "gaussian_derivative",
    "pseudo_ecg",
]

"""
Basic benchmark functions evaluated on already transformed coordinates z.

Every function has its global minimum value 0 (schwefel_mod up to rounding
of its published constants).
"""
from typing import Callable, Dict

import numpy as np

from ..errors import ConfigurationError

SCHWEFEL_OFFSET = 4.209687462275036e2
SCHWEFEL_CONSTANT = 4.189828872724338e2


def zakharov(z: np.ndarray) -> float:
    i = np.arange(1, z.size + 1)
    s = np.sum(0.5 * i * z)
    return float(np.sum(z ** 2) + s ** 2 + s ** 4)


def rosenbrock(z: np.ndarray) -> float:
    return float(np.sum(100.0 * (z[:-1] ** 2 - z[1:]) ** 2 + (z[:-1] - 1.0) ** 2))


def schaffer_f7_expanded(z: np.ndarray) -> float:
    s = np.sqrt(z[:-1] ** 2 + z[1:] ** 2)
    terms = np.sqrt(s) * (np.sin(50.0 * s ** 0.2) + 1.0)
    return float((np.sum(terms) / (z.size - 1)) ** 2)


def bent_cigar(z: np.ndarray) -> float:
    return float(z[0] ** 2 + 1e6 * np.sum(z[1:] ** 2))


def hgbat(z: np.ndarray) -> float:
    r2 = np.sum(z ** 2)
    s = np.sum(z)
    return float(np.abs(r2 ** 2 - s ** 2) ** 0.5 + (0.5 * r2 + s) / z.size + 0.5)


def rastrigin(z: np.ndarray) -> float:
    return float(np.sum(z ** 2 - 10.0 * np.cos(2.0 * np.pi * z) + 10.0))


def schwefel_mod(z: np.ndarray) -> float:
    """
    Modified Schwefel: wells centered at 420.9687 after the offset, with the
    landscape folded back and a quadratic penalty outside [-500, 500].
    """
    nx = z.size
    u = z + SCHWEFEL_OFFSET
    total = 0.0
    for ui in u:
        if ui > 500.0:
            m = 500.0 - np.fmod(ui, 500.0)
            total -= m * np.sin(np.sqrt(m))
            total += ((ui - 500.0) / 100.0) ** 2 / nx
        elif ui < -500.0:
            m = np.fmod(np.abs(ui), 500.0)
            total -= (m - 500.0) * np.sin(np.sqrt(500.0 - m))
            total += ((ui + 500.0) / 100.0) ** 2 / nx
        else:
            total -= ui * np.sin(np.sqrt(np.abs(ui)))
    return float(total + SCHWEFEL_CONSTANT * nx)


BASIC_FUNCTIONS: Dict[str, Callable[[np.ndarray], float]] = {
    "zakharov": zakharov,
    "rosenbrock": rosenbrock,
    "schaffer_f7_expanded": schaffer_f7_expanded,
    "bent_cigar": bent_cigar,
    "hgbat": hgbat,
    "rastrigin": rastrigin,
    "schwefel_mod": schwefel_mod,
}


def eval_basic(fn: str, z: np.ndarray) -> float:
    """
    Evaluate a basic function by id.

    Args:
        fn: One of BASIC_FUNCTIONS
        z: Transformed coordinates

    Returns:
        Function value
    """
    try:
        func = BASIC_FUNCTIONS[fn]
    except KeyError:
        raise ConfigurationError(
            f"unknown basic function '{fn}', expected one of {', '.join(BASIC_FUNCTIONS)}"
        ) from None
    return func(np.asarray(z, dtype=float))

"""
Dense symmetric linear algebra: covariance estimation, cyclic Jacobi
eigendecomposition and random orthogonal matrices.
"""
from dataclasses import dataclass

import numpy as np

from ..errors import ContractViolation, InsufficientSamplesError
from .rng import RngStream

JACOBI_TOLERANCE = 1e-12
JACOBI_MAX_SWEEPS = 100
SYMMETRY_TOLERANCE = 1e-10


@dataclass
class EigenSystem:
    """Eigenvectors as columns of Q, eigenvalues sorted descending."""
    Q: np.ndarray
    eigenvalues: np.ndarray

    @property
    def dimension(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> np.ndarray:
        return (self.Q * self.eigenvalues) @ self.Q.T

    def normalized_scales(self, floor: float = 1e-10) -> np.ndarray:
        """sqrt(lambda + floor) divided by its maximum."""
        s = np.sqrt(np.maximum(self.eigenvalues, 0.0) + floor)
        return s / s.max()


def covariance(points: np.ndarray) -> np.ndarray:
    """
    Unbiased sample covariance of the rows of points.

    Args:
        points: n x D array, n >= 2

    Returns:
        D x D symmetric matrix
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[0] < 2:
        raise InsufficientSamplesError("covariance needs at least two samples")
    centered = points - points.mean(axis=0)
    c = centered.T @ centered / (points.shape[0] - 1)
    return 0.5 * (c + c.T)


def eigh(S: np.ndarray) -> EigenSystem:
    """
    Symmetric eigendecomposition by cyclic Jacobi rotations.

    Sweeps over all off-diagonal pairs until the largest off-diagonal
    magnitude drops below 1e-12 times the largest diagonal magnitude, or
    100 sweeps have been made.

    Args:
        S: Symmetric D x D matrix

    Returns:
        EigenSystem with eigenvalues sorted in descending order
    """
    A = np.array(S, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ContractViolation(f"eigh needs a square matrix (got shape {A.shape})")
    scale = max(1.0, float(np.abs(A).max())) if A.size else 1.0
    if np.abs(A - A.T).max(initial=0.0) > SYMMETRY_TOLERANCE * scale:
        raise ContractViolation("eigh needs a symmetric matrix")
    A = 0.5 * (A + A.T)
    n = A.shape[0]
    V = np.eye(n)

    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.abs(A - np.diag(np.diag(A)))
        threshold = JACOBI_TOLERANCE * np.abs(np.diag(A)).max(initial=0.0)
        if off.max(initial=0.0) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J with J the (p, q) plane rotation
                row_p, row_q = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                col_p, col_q = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq

    eigenvalues = np.diag(A).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    return EigenSystem(Q=V[:, order], eigenvalues=eigenvalues[order])


def random_orthogonal(dimension: int, rng: RngStream) -> np.ndarray:
    """
    Random rotation from the QR factorization of a standard-normal matrix.

    Columns are sign-fixed so the triangular factor has a positive diagonal,
    then the first column is flipped if needed to make det = +1.
    """
    if dimension < 1:
        raise ContractViolation(f"dimension must be >= 1 (got {dimension})")
    G = rng.normal(size=(dimension, dimension))
    Q, R = np.linalg.qr(G)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    Q = Q * signs
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q

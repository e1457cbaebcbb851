"""
Graph-eikonal forward model of a planar activation calibration toy.

Activation spreads from a few seeded sites (u, v, onset) over an 8-neighbor
grid graph; first-arrival times are multi-source shortest paths. A linear
lead field maps derivative-of-Gaussian node sources to pseudo-ECG leads.
"""
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.csgraph import dijkstra

from ..core.rng import RngStream
from ..errors import ContractViolation

NEIGHBOR_OFFSETS = ((1, 0), (0, 1), (1, 1), (1, -1))
DEFAULT_TAU_MS = 4.0
# shift of the virtual-source edge weights so an onset of 0 stays an edge
SOURCE_OFFSET = 1.0


class GridGraph:
    """
    nx x ny grid with unit spacing. Node k = j * nx + i sits at (i, j).

    Edges join 8-neighbors; traversal time is Euclidean length divided by
    the mean speed of the two endpoints.
    """

    def __init__(self, nx: int, ny: int, speed: np.ndarray):
        if nx < 2 or ny < 2:
            raise ContractViolation(f"grid must be at least 2x2 (got {nx}x{ny})")
        speed = np.asarray(speed, dtype=float).reshape(-1)
        if speed.size != nx * ny:
            raise ContractViolation(f"expected {nx * ny} node speeds, got {speed.size}")
        if not np.all(speed > 0):
            raise ContractViolation("conduction speeds must be positive")
        self.nx = nx
        self.ny = ny
        self.speed = speed
        jj, ii = np.divmod(np.arange(nx * ny), nx)
        self.positions = np.column_stack([ii, jj]).astype(float)
        self.adjacency = self._build_adjacency()

    @classmethod
    def uniform(cls, nx: int, ny: int, speed: float = 1.0) -> "GridGraph":
        return cls(nx, ny, np.full(nx * ny, float(speed)))

    @property
    def n_nodes(self) -> int:
        return self.nx * self.ny

    def node_index(self, i: int, j: int) -> int:
        return j * self.nx + i

    def _build_adjacency(self) -> csr_matrix:
        rows, cols, weights = [], [], []
        i, j = np.meshgrid(np.arange(self.nx), np.arange(self.ny), indexing="xy")
        i, j = i.ravel(), j.ravel()
        for di, dj in NEIGHBOR_OFFSETS:
            i2, j2 = i + di, j + dj
            ok = (i2 >= 0) & (i2 < self.nx) & (j2 >= 0) & (j2 < self.ny)
            a = j[ok] * self.nx + i[ok]
            b = j2[ok] * self.nx + i2[ok]
            length = np.hypot(di, dj)
            w = length / (0.5 * (self.speed[a] + self.speed[b]))
            rows.append(a)
            cols.append(b)
            weights.append(w)
        rows, cols, weights = map(np.concatenate, (rows, cols, weights))
        n = self.n_nodes
        upper = coo_matrix((weights, (rows, cols)), shape=(n, n))
        return (upper + upper.T).tocsr()

    def nearest_node(self, u: float, v: float) -> int:
        """Node nearest to (u, v), rounding half up and clamping to the grid."""
        i = int(np.clip(np.floor(u + 0.5), 0, self.nx - 1))
        j = int(np.clip(np.floor(v + 0.5), 0, self.ny - 1))
        return self.node_index(i, j)


@dataclass
class PmjConfig:
    """Activation sites as rows of (u, v, t_onset)."""
    sites: np.ndarray

    def __post_init__(self):
        self.sites = np.atleast_2d(np.asarray(self.sites, dtype=float))
        if self.sites.shape[1] != 3:
            raise ContractViolation(f"sites must have 3 columns (got {self.sites.shape[1]})")

    @classmethod
    def from_vector(cls, x: np.ndarray) -> "PmjConfig":
        x = np.asarray(x, dtype=float)
        if x.size % 3 != 0:
            raise ContractViolation(f"decision vector length {x.size} is not a multiple of 3")
        return cls(x.reshape(-1, 3))

    def to_vector(self) -> np.ndarray:
        return self.sites.reshape(-1).copy()

    @property
    def n_sites(self) -> int:
        return self.sites.shape[0]

    def validate(self, graph: GridGraph, t_onset_max: float) -> None:
        u, v, t = self.sites.T
        if np.any(u < 0) or np.any(u > graph.nx - 1) or np.any(v < 0) or np.any(v > graph.ny - 1):
            raise ContractViolation("site coordinates must lie inside the grid")
        if np.any(t < 0) or np.any(t > t_onset_max):
            raise ContractViolation(f"onsets must lie in [0, {t_onset_max}]")


@dataclass
class LeadField:
    """L x K matrix mapping node sources to leads; each row has zero mean."""
    B: np.ndarray

    @property
    def n_leads(self) -> int:
        return self.B.shape[0]

    @classmethod
    def generate(cls, graph: GridGraph, n_leads: int, rng: RngStream, noise: float = 0.1) -> "LeadField":
        """
        Dipole-like leads: lead l weights each node by its projection on the
        direction at angle 2 pi l / L, plus Gaussian noise, then centers the row.
        """
        centered = graph.positions - graph.positions.mean(axis=0)
        centered /= np.abs(centered).max()
        angles = 2.0 * np.pi * np.arange(n_leads) / n_leads
        directions = np.column_stack([np.cos(angles), np.sin(angles)])
        B = directions @ centered.T + noise * rng.normal(size=(n_leads, graph.n_nodes))
        B -= B.mean(axis=1, keepdims=True)
        return cls(B)


@dataclass
class EcgSignal:
    """Leads as an L x T array sampled every `sample_period` ms."""
    leads: np.ndarray
    sample_period: float = 1.0

    def __post_init__(self):
        self.leads = np.atleast_2d(np.asarray(self.leads, dtype=float))
        if self.sample_period <= 0:
            raise ContractViolation(f"sample_period must be positive (got {self.sample_period})")

    @property
    def n_leads(self) -> int:
        return self.leads.shape[0]

    @property
    def n_samples(self) -> int:
        return self.leads.shape[1]


def activation_map(graph: GridGraph, pmj: PmjConfig) -> np.ndarray:
    """
    First-arrival time of every node.

    t_a(k) = min over sites s of onset_s + shortest-path time from the node
    nearest to s to k.

    Solved as one shortest-path search from a virtual source joined to each
    site node by an edge of weight onset + SOURCE_OFFSET; sites sharing a
    node keep the earliest onset.
    """
    nodes = np.array([graph.nearest_node(u, v) for u, v, _ in pmj.sites])
    site_nodes, inverse = np.unique(nodes, return_inverse=True)
    onsets = np.full(site_nodes.size, np.inf)
    np.minimum.at(onsets, inverse, pmj.sites[:, 2])

    adjacency = graph.adjacency
    n = graph.n_nodes
    extended = csr_matrix(
        (
            np.concatenate([adjacency.data, onsets + SOURCE_OFFSET]),
            np.concatenate([adjacency.indices, site_nodes]),
            np.append(adjacency.indptr, adjacency.nnz + site_nodes.size),
        ),
        shape=(n + 1, n + 1),
    )
    # adjacency is stored symmetric
    times = dijkstra(extended, directed=True, indices=n)
    return times[:n] - SOURCE_OFFSET


def gaussian_derivative(z: np.ndarray) -> np.ndarray:
    """First derivative of exp(-z^2 / 2)."""
    return -z * np.exp(-0.5 * z * z)


def pseudo_ecg(t_a: np.ndarray, lead_field: LeadField, horizon: int,
               tau: float = DEFAULT_TAU_MS, sample_period: float = 1.0) -> EcgSignal:
    """
    y_l(t) = sum_k B[l, k] phi((t - t_a(k)) / tau) sampled at t = 0, dt, ...

    Args:
        t_a: Node activation times (ms)
        lead_field: Lead field with K columns
        horizon: Number of samples T
        tau: Pulse width (ms)
        sample_period: Sampling interval (ms)

    Returns:
        EcgSignal of shape L x T
    """
    t_a = np.asarray(t_a, dtype=float)
    if not np.all(np.isfinite(t_a)):
        raise ContractViolation("activation times must be finite")
    t = np.arange(horizon) * sample_period
    # gaussian_derivative((t - t_a) / tau) without temporaries
    z = t[None, :] - t_a[:, None]
    z /= tau
    phi = z * z
    phi *= -0.5
    np.exp(phi, out=phi)
    phi *= z
    np.negative(phi, out=phi)
    return EcgSignal(lead_field.B @ phi, sample_period)

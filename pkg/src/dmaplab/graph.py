"""Kernel affinity matrices, degrees, the normalized graph Laplacian, and
neighborhood ball counts for point clouds."""

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree


@dataclass
class KernelConfig:
    h: float
    n: int
    d: int

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError("bandwidth must be positive")
        if self.n < 2:
            raise ValueError("need at least two points")


@dataclass
class LaplacianSystem:
    """Density-normalized affinity W, degrees, and L = (D^-1 W - I)/h^2.

    ball_counts and d are carried along when known (they are needed later
    for the l2(1/p-hat) eigenvector normalization); pipelines built through
    system_from_cloud always fill them.
    """

    W: np.ndarray
    degree: np.ndarray
    L: np.ndarray
    h: float
    ball_counts: np.ndarray = None
    d: int = None

    @property
    def n(self):
        return self.W.shape[0]


def bandwidth(n, d):
    """Kernel bandwidth rule h = (log n / n)^(1/(4d+13))."""
    if n < 3:
        raise ValueError("bandwidth rule needs n >= 3")
    return float((np.log(n) / n) ** (1.0 / (4 * d + 13)))


def gaussian_kernel(x, y, h):
    """exp(-|x-y|^2 / (4 h^2))."""
    if h <= 0:
        raise ValueError("bandwidth must be positive")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("dimension mismatch between points")
    diff = x - y
    return float(np.exp(-(diff @ diff) / (4.0 * h * h)))


def build_affinity(cloud, h):
    """Density-normalized affinity of a cloud.

    Returns (W, q) with q_i = sum_j k_h(x_i, x_j) (self term included) and
    W_ij = k_h(x_i, x_j) / (q_i q_j).
    """
    x = cloud.points
    n = x.shape[0]
    if n < 2:
        raise ValueError("need at least two points")
    sq = np.sum(x * x, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    np.maximum(d2, 0.0, out=d2)
    K = np.exp(-d2 / (4.0 * h * h))
    q = K.sum(axis=1)
    W = K / np.outer(q, q)
    return W, q


def laplacian(W, h, ball_counts=None, d=None):
    """Assemble the normalized graph Laplacian L = (D^-1 W - I) / h^2.

    W must be symmetric with positive diagonal; rows of L sum to zero and
    -L is positive semidefinite (it is conjugate to a symmetric PSD form).
    """
    if h <= 0:
        raise ValueError("bandwidth must be positive")
    W = np.asarray(W, dtype=float)
    n = W.shape[0]
    if W.shape != (n, n):
        raise ValueError("W must be square")
    if np.max(np.abs(W - W.T)) > 1e-12 * max(1.0, np.max(np.abs(W))):
        raise ValueError("W must be symmetric")
    if np.any(np.diag(W) <= 0):
        raise ValueError("W needs a positive diagonal")
    deg = W.sum(axis=1)
    if np.any(deg <= 0):
        raise ValueError("zero-degree row in W")
    L = (W / deg[:, None] - np.eye(n)) / (h * h)
    if ball_counts is not None:
        ball_counts = np.asarray(ball_counts)
        if np.any(ball_counts < 1):
            raise ValueError("ball counts must be >= 1")
    return LaplacianSystem(W=W, degree=deg, L=L, h=h,
                           ball_counts=ball_counts, d=d)


def ball_counts(cloud, h):
    """Number of sample points strictly within distance h of each point,
    the center itself included."""
    x = cloud.points
    tree = cKDTree(x)
    # query_ball_point includes the boundary; shrink to make the ball open
    r = np.nextafter(h, 0.0)
    counts = tree.query_ball_point(x, r, return_length=True)
    return np.asarray(counts, dtype=int)


def system_from_cloud(cloud, h=None):
    """Full Laplacian assembly for a cloud: bandwidth rule (unless h is
    given), affinity, degrees, L, and ball counts."""
    if h is None:
        h = bandwidth(cloud.n, cloud.d)
    W, _ = build_affinity(cloud, h)
    counts = ball_counts(cloud, h)
    return laplacian(W, h, ball_counts=counts, d=cloud.d)

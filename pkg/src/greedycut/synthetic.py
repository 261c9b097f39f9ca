"""Seeded synthetic datasets: Gaussian blobs, concentric rings, grid graphs."""

import numpy as np

from .errors import InvalidArgs
from .graph import SparseGraph, from_edges

__all__ = ["blobs", "rings", "grid_graph"]


def blobs(n_clusters, n_per_cluster, dim=2, separation=8.0, sigma=1.0, seed=0):
    """Isotropic Gaussian blobs whose centers are ``separation * sigma`` apart
    (adjacent centers sit on a regular polygon in the first two axes).

    Returns ``(X, y)``.
    """
    if n_clusters < 1 or n_per_cluster < 1 or dim < 1:
        raise InvalidArgs("n_clusters, n_per_cluster and dim must be positive")
    if n_clusters > 2 and dim < 2:
        raise InvalidArgs("more than two blobs need dim >= 2")
    rng = np.random.default_rng(seed)
    centers = np.zeros((n_clusters, dim))
    if n_clusters == 2:
        centers[1, 0] = separation * sigma
    elif n_clusters > 2:
        radius = separation * sigma / (2 * np.sin(np.pi / n_clusters))
        ang = 2 * np.pi * np.arange(n_clusters) / n_clusters
        centers[:, 0] = radius * np.cos(ang)
        centers[:, 1] = radius * np.sin(ang)
    y = np.repeat(np.arange(n_clusters), n_per_cluster)
    X = centers[y] + sigma * rng.standard_normal((len(y), dim))
    return X, y


def rings(n, n_rings=2, radius_ratio=2.0, noise=0.05, seed=0):
    """Concentric noisy circles with radii ``1, ratio, ratio**2, ...``.

    Each point gets Gaussian noise of scale ``noise * r`` for its ring radius
    ``r``. Returns ``(X, y)``.
    """
    if n < n_rings or n_rings < 1:
        raise InvalidArgs("need at least one point per ring")
    rng = np.random.default_rng(seed)
    y = np.arange(n) * n_rings // n
    r = radius_ratio ** y.astype(float)
    theta = rng.uniform(0, 2 * np.pi, n)
    X = np.column_stack([r * np.cos(theta), r * np.sin(theta)])
    X += (noise * r)[:, None] * rng.standard_normal((n, 2))
    return X, y


def grid_graph(rows, cols) -> SparseGraph:
    """4-connected lattice with unit weights; vertex ``r * cols + c``."""
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise InvalidArgs("grid needs at least two vertices")
    idx = np.arange(rows * cols).reshape(rows, cols)
    u = np.concatenate([idx[:, :-1].ravel(), idx[:-1, :].ravel()])
    v = np.concatenate([idx[:, 1:].ravel(), idx[1:, :].ravel()])
    return from_edges(u, v, np.ones(len(u)), n=rows * cols)

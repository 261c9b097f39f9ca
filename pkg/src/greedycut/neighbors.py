"""k-nearest-neighbor similarity graphs from dense features.

Neighbors are exact under squared Euclidean distance, ties resolved toward
the smaller sample id. Edge weights follow the parameter-free closed form

    w_ij = (d_{i,k+1} - d_ij) / (k d_{i,k+1} - sum_{h<=k} d_ih)

for the k nearest ``j`` of ``i``, which makes every row sum to one before
the graph is symmetrized by averaging.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgs
from .graph import SparseGraph, from_edges

__all__ = [
    "NeighborLists",
    "default_k",
    "knn",
    "clr_weights",
    "knn_graph",
    "zscore",
    "read_features",
]

DEGENERATE_TOL = 1e-12
_BRUTE_MAX_N = 4096
_CHUNK_ELEMS = 1 << 22


@dataclass(frozen=True)
class NeighborLists:
    """Per-sample neighbors sorted by (distance, id). Shape ``(n, k)``."""

    ids: np.ndarray
    dists: np.ndarray

    @property
    def k(self) -> int:
        return self.ids.shape[1]

    @property
    def n(self) -> int:
        return self.ids.shape[0]


def default_k(n: int, c: int) -> int:
    """Neighborhood size ``min(50, n // c)``, at least 1."""
    if n < 2 or not (1 <= c < n):
        raise InvalidArgs(f"need n >= 2 and 1 <= c < n, got n={n}, c={c}")
    return max(1, min(50, n // c))


def zscore(features):
    """Standardize each column; constant columns are only centered."""
    x = np.asarray(features, dtype=np.float64)
    sd = x.std(axis=0)
    sd[sd == 0] = 1.0
    return (x - x.mean(axis=0)) / sd


def read_features(path) -> np.ndarray:
    """Load a header-less TSV feature matrix, one sample per line."""
    x = np.loadtxt(path, delimiter="\t", dtype=np.float64, ndmin=2)
    return x


def _check_features(features):
    x = np.asarray(features, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] < 2 or x.shape[1] < 1:
        raise InvalidArgs(f"features must be n x d with n >= 2, d >= 1; got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidArgs("features contain non-finite values")
    return np.ascontiguousarray(x)


def _sqdist(x, rows, cols):
    diff = x[rows][:, None, :] - x[cols][None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _select(dist_row, ids, k):
    """k smallest of one row, ordered by (distance, id)."""
    order = np.lexsort((ids, dist_row))[:k]
    return ids[order], dist_row[order]


def _brute_rows(x, rows, k):
    n = x.shape[0]
    out_ids = np.empty((len(rows), k), dtype=np.int64)
    out_d = np.empty((len(rows), k))
    all_ids = np.arange(n)
    step = max(1, _CHUNK_ELEMS // (n * x.shape[1]))
    for lo in range(0, len(rows), step):
        chunk = rows[lo : lo + step]
        dist = _sqdist(x, chunk, all_ids)
        dist[np.arange(len(chunk)), chunk] = np.inf
        kth = np.partition(dist, k - 1, axis=1)[:, k - 1]
        for r in range(len(chunk)):
            cand = np.flatnonzero(dist[r] <= kth[r])
            ids, d = _select(dist[r, cand], cand, k)
            out_ids[lo + r], out_d[lo + r] = ids, d
    return out_ids, out_d


def _tree_rows(x, k):
    from scipy.spatial import cKDTree

    n = x.shape[0]
    fetch = k + 2
    _, cand = cKDTree(x).query(x, fetch)
    cand = cand.astype(np.int64)
    diff = x[cand] - x[:, None, :]
    dist = np.einsum("ijk,ijk->ij", diff, diff)
    dist[cand == np.arange(n)[:, None]] = np.inf
    order = np.lexsort((cand, dist), axis=-1)
    cand = np.take_along_axis(cand, order, axis=1)
    dist = np.take_along_axis(dist, order, axis=1)
    # self sorts last; a tie at the fetch boundary may hide equidistant
    # points the tree did not return, so those rows are redone exhaustively
    last = dist[:, fetch - 2]
    redo = np.flatnonzero(np.isinf(last) | (dist[:, k - 1] >= last))
    ids, d = cand[:, :k].copy(), dist[:, :k].copy()
    if len(redo):
        ids[redo], d[redo] = _brute_rows(x, redo, k)
    return ids, d


def knn(features, k: int, method: str = "auto") -> NeighborLists:
    """Exact k nearest neighbors of every sample (itself excluded).

    ``method`` is ``"brute"``, ``"kdtree"`` or ``"auto"`` (brute force up to
    a few thousand samples). Both give the same lists; the tree route only
    narrows the candidate set and rescores it with the same distance.
    """
    x = _check_features(features)
    n = x.shape[0]
    if not (1 <= k <= n - 1):
        raise InvalidArgs(f"k must be in [1, {n - 1}], got {k}")
    if method == "auto":
        method = "brute" if n <= _BRUTE_MAX_N or k + 2 > n else "kdtree"
    if method == "brute":
        ids, d = _brute_rows(x, np.arange(n), k)
    elif method == "kdtree":
        if k + 2 > n:
            ids, d = _brute_rows(x, np.arange(n), k)
        else:
            ids, d = _tree_rows(x, k)
    else:
        raise InvalidArgs(f"unknown method {method!r}")
    return NeighborLists(ids, d)


def clr_weights(neighbors: NeighborLists, k: int) -> SparseGraph:
    """Row-stochastic neighbor weights, symmetrized by averaging.

    ``neighbors`` must carry at least ``k + 1`` entries per row; the
    ``(k+1)``-th distance sets the scale. A row whose ``k + 1`` nearest are
    equidistant gets uniform weights ``1/k``.
    """
    if k < 1 or neighbors.k < k + 1:
        raise InvalidArgs(f"need at least k+1={k + 1} neighbors per row, have {neighbors.k}")
    n = neighbors.n
    d = neighbors.dists[:, : k + 1]
    far = d[:, k]
    num = far[:, None] - d[:, :k]
    den = k * far - d[:, :k].sum(axis=1)
    degenerate = den <= DEGENERATE_TOL
    w = np.empty((n, k))
    ok = ~degenerate
    w[ok] = num[ok] / den[ok, None]
    w[degenerate] = 1.0 / k

    rows = np.repeat(np.arange(n), k)
    cols = neighbors.ids[:, :k].ravel()
    vals = w.ravel()
    # (w_ij + w_ji) / 2 over the union of both directions
    lo, hi = np.minimum(rows, cols), np.maximum(rows, cols)
    key = lo * n + hi
    uniq, inv = np.unique(key, return_inverse=True)
    total = np.zeros(len(uniq))
    np.add.at(total, inv, vals)
    total /= 2.0
    keep = total > 0
    return from_edges(uniq[keep] // n, uniq[keep] % n, total[keep], n=n)


def knn_graph(features, k: int, method: str = "auto") -> SparseGraph:
    """Convenience: exact ``k+1`` neighbors, then :func:`clr_weights`."""
    x = _check_features(features)
    if not (1 <= k <= x.shape[0] - 2):
        raise InvalidArgs(f"k must be in [1, n-2] to leave a scale neighbor, got {k}")
    return clr_weights(knn(x, k + 1, method=method), k)

"""Slow reference implementations used to check the fast engine.

:func:`naive_run` replays the greedy loop but rebuilds every cluster-level
quantity from the vertex labels at each step, scanning all cluster pairs.
:func:`exhaustive_best_ncut` enumerates every partition of a tiny graph.
Neither shares code with the engine.
"""

from __future__ import annotations

import math

import numpy as np

from .engine import MergeTrace, Partition, RunOptions
from .errors import InvalidArgs, QueueExhausted, TooLarge
from .graph import SparseGraph

__all__ = ["naive_run", "exhaustive_best_ncut", "NAIVE_MAX_N", "EXHAUSTIVE_MAX_N"]

NAIVE_MAX_N = 2000
EXHAUSTIVE_MAX_N = 12


def _first_appearance(owner):
    _, first, inv = np.unique(owner, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inv]


def _cluster_tables(graph, owner_idx, m):
    """Dense cluster-by-cluster weight sums and cluster volumes."""
    rows = np.repeat(np.arange(graph.n), np.diff(graph.row_offsets))
    a, b = owner_idx[rows], owner_idx[graph.col_indices]
    cross = np.bincount(a * m + b, weights=graph.weights, minlength=m * m).reshape(m, m)
    vol = np.bincount(owner_idx, weights=graph.degrees, minlength=m)
    return cross, vol


def _cut(cross):
    """Weight leaving each cluster, y_k^T L y_k; exactly 0 for a whole component."""
    off = cross.copy()
    off[np.diag_indices(len(off))] = 0.0
    return off.sum(axis=1)


def _direct_ncut(cross, vol):
    return math.fsum((_cut(cross) / vol).tolist())


def naive_run(graph: SparseGraph, c: int, options: RunOptions | None = None):
    """Greedy merging with a full rescan per step; returns ``(Partition, MergeTrace)``."""
    options = options or RunOptions()
    n = graph.n
    if n > NAIVE_MAX_N:
        raise TooLarge(f"naive engine is limited to n <= {NAIVE_MAX_N}, got {n}")
    if not isinstance(c, (int, np.integer)) or not (1 <= c <= n):
        raise InvalidArgs(f"c must be an integer in [1, {n}], got {c!r}")
    sign = -1.0 if options.selection == "max" else 1.0

    owner = np.arange(n, dtype=np.int64)
    next_id = n
    steps = []
    cross, vol = _cluster_tables(graph, owner, n)
    before = _direct_ncut(cross, vol)
    while next_id - n < n - c:
        ids, owner_idx = np.unique(owner, return_inverse=True)
        m = len(ids)
        cross, vol = _cluster_tables(graph, owner_idx, m)
        l = -cross
        l[np.diag_indices(m)] = _cut(cross)
        ii, jj = np.triu_indices(m, 1)
        linked = cross[ii, jj] > 0
        if np.any(linked):
            ii, jj = ii[linked], jj[linked]
            lij = l[ii, jj]
        else:
            if options.disconnected == "strict":
                raise QueueExhausted(
                    f"no neighboring clusters left with {m} > {c} clusters",
                    partition=Partition(_first_appearance(owner)),
                    trace=_trace(steps, before),
                )
            lij = np.zeros(len(ii))
        li, lj = l[ii, ii], l[jj, jj]
        di, dj = vol[ii], vol[jj]
        delta = li / di + lj / dj - (li + lj + 2.0 * lij) / (di + dj)
        # ids are sorted, so compact index order is id order
        best = np.lexsort((jj, ii, sign * delta))[0]
        a, b = int(ids[ii[best]]), int(ids[jj[best]])
        owner[(owner == a) | (owner == b)] = next_id
        _, owner_idx = np.unique(owner, return_inverse=True)
        cross2, vol2 = _cluster_tables(graph, owner_idx, m - 1)
        steps.append((a, b, next_id, float(delta[best]), _direct_ncut(cross2, vol2)))
        next_id += 1
    return Partition(_first_appearance(owner)), _trace(steps, before)


def _trace(steps, before):
    cols = list(zip(*steps)) if steps else [[], [], [], [], []]
    return MergeTrace(*cols, objective_before=before)


def _restricted_growth(n, c):
    """All label vectors with first-appearance numbering and exactly ``c``
    blocks, in lexicographic order."""
    rows = np.zeros((1, 1), dtype=np.int8)
    blocks = np.ones(1, dtype=np.int64)
    for t in range(1, n):
        remaining = n - t - 1
        parts, counts = [], []
        for v in range(c):
            ok = (v <= blocks) & (np.maximum(blocks, v + 1) + remaining >= c)
            if not np.any(ok):
                continue
            sel = np.flatnonzero(ok)
            parts.append((sel, v))
            counts.append(np.maximum(blocks[sel], v + 1))
        src = np.concatenate([sel for sel, _ in parts])
        vals = np.concatenate([np.full(len(sel), v, dtype=np.int8) for sel, v in parts])
        order = np.lexsort((vals, src))
        rows = np.column_stack([rows[src[order]], vals[order]])
        blocks = np.concatenate(counts)[order]
    return rows[blocks == c]


def exhaustive_best_ncut(graph: SparseGraph, c: int):
    """Minimum normalized cut over all partitions into exactly ``c`` blocks.

    Returns ``(Partition, value)``; among equal values the lexicographically
    smallest label vector wins.
    """
    n = graph.n
    if n > EXHAUSTIVE_MAX_N:
        raise TooLarge(f"exhaustive search is limited to n <= {EXHAUSTIVE_MAX_N}, got {n}")
    if not isinstance(c, (int, np.integer)) or not (1 <= c <= n):
        raise InvalidArgs(f"c must be an integer in [1, {n}], got {c!r}")
    labels = _restricted_growth(n, int(c)).astype(np.int64)
    rows = np.repeat(np.arange(n), np.diff(graph.row_offsets))
    cols, w, d = graph.col_indices, graph.weights, graph.degrees
    terms = np.empty((len(labels), c))
    for k in range(c):
        mask = labels == k
        vol = mask.astype(np.float64) @ d
        internal2 = (mask[:, rows] & mask[:, cols]).astype(np.float64) @ w
        terms[:, k] = (vol - internal2) / vol
    # sum the sorted terms so relabeled twins score bit-identically
    terms.sort(axis=1)
    value = terms[:, 0].copy()
    for k in range(1, c):
        value += terms[:, k]
    best = np.flatnonzero(value == value.min())[0]
    return Partition(labels[best]), float(value[best])

"""Normalized cut of a labeling, and external clustering-quality scores."""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import EmptyCluster, InvalidArgs, LengthMismatch
from .graph import SparseGraph

__all__ = ["ncut", "contingency", "nmi", "ari", "acc"]


def _labels(x):
    a = np.asarray(x)
    if a.ndim != 1:
        raise InvalidArgs("labels must be one-dimensional")
    if len(a) and not np.issubdtype(a.dtype, np.integer):
        if not np.all(a == np.round(a)):
            raise InvalidArgs("labels must be integers")
        a = a.astype(np.int64)
    return a


def ncut(graph: SparseGraph, labels, c: int | None = None) -> float:
    """Normalized cut ``sum_k cut(k) / vol(k)`` recomputed from scratch.

    ``c``, when given, declares the label range ``[0, c)``; a label in that
    range without members raises :class:`EmptyCluster`.
    """
    lab = _labels(labels)
    if len(lab) != graph.n:
        raise LengthMismatch(f"{len(lab)} labels for {graph.n} vertices")
    if len(lab) and lab.min() < 0:
        raise InvalidArgs("labels must be nonnegative")
    if c is not None and len(lab) and lab.max() >= c:
        raise InvalidArgs(f"label {lab.max()} outside [0, {c})")
    k = int(c) if c is not None else int(lab.max()) + 1
    vol = np.bincount(lab, weights=graph.degrees, minlength=k)
    sizes = np.bincount(lab, minlength=k)
    if c is not None and np.any(sizes == 0):
        raise EmptyCluster(f"cluster {int(np.flatnonzero(sizes == 0)[0])} has no members")
    rows = np.repeat(np.arange(graph.n), np.diff(graph.row_offsets))
    same = lab[rows] == lab[graph.col_indices]
    # both directions are stored, so this is already 2 x internal weight
    internal2 = np.bincount(lab[rows[same]], weights=graph.weights[same], minlength=k)
    used = np.flatnonzero(sizes)
    terms = (vol[used] - internal2[used]) / vol[used]
    return math.fsum(terms.tolist())


def contingency(labels_a, labels_b) -> np.ndarray:
    """Count matrix ``n_ij = |A_i & B_j|`` over the labels that occur."""
    a, b = _labels(labels_a), _labels(labels_b)
    if len(a) != len(b):
        raise LengthMismatch(f"label vectors differ in length: {len(a)} vs {len(b)}")
    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    ka = int(ia.max()) + 1 if len(a) else 0
    kb = int(ib.max()) + 1 if len(b) else 0
    table = np.zeros((ka, kb), dtype=np.int64)
    np.add.at(table, (ia, ib), 1)
    return table


def _entropy(counts, n):
    p = counts[counts > 0] / n
    return -math.fsum((p * np.log(p)).tolist())


def nmi(labels_a, labels_b) -> float:
    """``2 I(A;B) / (H(A) + H(B))`` with natural logs.

    Two single-cluster labelings score 1; exactly one scores 0.
    """
    t = contingency(labels_a, labels_b)
    n = int(t.sum())
    if n < 1:
        raise InvalidArgs("need at least one sample")
    ra, rb = t.sum(axis=1), t.sum(axis=0)
    ha, hb = _entropy(ra, n), _entropy(rb, n)
    if ha + hb == 0.0:
        return 1.0
    if ha == 0.0 or hb == 0.0:
        return 0.0
    i, j = np.nonzero(t)
    nij = t[i, j].astype(np.float64)
    mi = math.fsum((nij / n * np.log(n * nij / (ra[i] * rb[j]))).tolist())
    return max(0.0, min(1.0, 2.0 * mi / (ha + hb)))


def _pairs(x):
    return sum(int(v) * (int(v) - 1) // 2 for v in np.ravel(x))


def ari(labels_a, labels_b) -> float:
    """Adjusted Rand index with ``E[RI] = sum C(|A_i|,2) sum C(|B_j|,2) / C(n,2)``.

    Pair counts are exact integers, so only the final division rounds.
    """
    t = contingency(labels_a, labels_b)
    n = int(t.sum())
    if n < 2:
        raise InvalidArgs("need at least two samples")
    index = _pairs(t)
    sa, sb = _pairs(t.sum(axis=1)), _pairs(t.sum(axis=0))
    total = n * (n - 1) // 2
    # numerator and denominator of (RI - E) / (max - E), both scaled by 2 C(n,2)
    num = 2 * (index * total - sa * sb)
    den = (sa + sb) * total - 2 * sa * sb
    if den == 0:
        # only when both labelings are trivial in the same way
        return 1.0
    return num / den


def acc(labels_true, labels_pred) -> float:
    """Fraction of samples matched under the best one-to-one relabeling."""
    t = contingency(labels_true, labels_pred)
    n = int(t.sum())
    if n < 1:
        raise InvalidArgs("need at least one sample")
    k = max(t.shape)
    square = np.zeros((k, k), dtype=np.int64)
    square[: t.shape[0], : t.shape[1]] = t
    r, c = linear_sum_assignment(square, maximize=True)
    return int(square[r, c].sum()) / n

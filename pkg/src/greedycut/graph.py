"""Sparse symmetric weighted graphs in compressed-row form.

The Laplacian ``L = D - W`` is never materialized; :func:`laplacian_entry`
reads it off the adjacency and the degree vector.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from .errors import (
    DuplicateEdge,
    IndexOutOfRange,
    IsolatedVertex,
    NonPositiveWeight,
    ParseError,
    SelfLoop,
)

__all__ = [
    "SparseGraph",
    "ValidationReport",
    "from_edges",
    "from_scipy",
    "load_edge_list",
    "dump_edge_list",
    "read_edge_list",
    "write_edge_list",
    "validate",
    "laplacian_entry",
]


@dataclass(frozen=True, eq=False)
class SparseGraph:
    """Undirected weighted graph, both directions of each edge stored.

    Build instances through :func:`from_edges`, :func:`from_scipy` or
    :func:`load_edge_list`; those enforce the invariants checked by
    :func:`validate`. The arrays are flagged read-only.
    """

    n: int
    row_offsets: np.ndarray
    col_indices: np.ndarray
    weights: np.ndarray
    degrees: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("row_offsets", "col_indices", "weights", "degrees"):
            arr = getattr(self, name)
            if arr.flags.writeable:
                arr = arr.copy()
                arr.flags.writeable = False
                object.__setattr__(self, name, arr)

    @property
    def n_edges(self) -> int:
        """Number of undirected edges."""
        return len(self.col_indices) // 2

    def row(self, i):
        lo, hi = self.row_offsets[i], self.row_offsets[i + 1]
        return self.col_indices[lo:hi], self.weights[lo:hi]

    def edges(self):
        """Canonical ``(u, v, w)`` arrays with ``u < v``, sorted by ``(u, v)``."""
        rows = np.repeat(np.arange(self.n), np.diff(self.row_offsets))
        keep = rows < self.col_indices
        return rows[keep], self.col_indices[keep], self.weights[keep]

    def to_scipy(self):
        import scipy.sparse as sp

        return sp.csr_matrix(
            (self.weights, self.col_indices, self.row_offsets), shape=(self.n, self.n)
        )

    def __eq__(self, other):
        if not isinstance(other, SparseGraph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.row_offsets, other.row_offsets)
            and np.array_equal(self.col_indices, other.col_indices)
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None


@dataclass
class ValidationReport:
    issues: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, code, where, message):
        self.issues.append((code, where, message))

    def codes(self):
        return {code for code, _, _ in self.issues}


def _row_sums(row_offsets, weights):
    n = len(row_offsets) - 1
    out = np.zeros(n)
    nonempty = np.flatnonzero(np.diff(row_offsets) > 0)
    if len(nonempty):
        out[nonempty] = np.add.reduceat(weights, row_offsets[nonempty])
    return out


def from_edges(u, v, w, n=None) -> SparseGraph:
    """Build a canonical graph from an undirected edge list.

    Each unordered pair must appear once, in either orientation.
    ``n`` defaults to ``1 + max(id)``.
    """
    u = np.asarray(u, dtype=np.int64).ravel()
    v = np.asarray(v, dtype=np.int64).ravel()
    w = np.asarray(w, dtype=np.float64).ravel()
    if not (len(u) == len(v) == len(w)):
        raise ValueError("u, v and w must have equal length")
    if len(u) and min(u.min(), v.min()) < 0:
        raise IndexOutOfRange("vertex ids must be nonnegative")
    if n is None:
        n = int(max(u.max(), v.max())) + 1 if len(u) else 0
    elif len(u) and max(u.max(), v.max()) >= n:
        raise IndexOutOfRange(f"vertex id >= n={n}")
    if n < 1:
        raise IsolatedVertex("graph has no vertices with incident edges")

    loops = np.flatnonzero(u == v)
    if len(loops):
        raise SelfLoop(f"self-loop at vertex {u[loops[0]]}")
    bad = np.flatnonzero(~(w > 0) | ~np.isfinite(w))
    if len(bad):
        k = bad[0]
        raise NonPositiveWeight(f"edge ({u[k]}, {v[k]}) has weight {w[k]!r}")

    lo, hi = np.minimum(u, v), np.maximum(u, v)
    key = lo * n + hi
    order = np.argsort(key, kind="stable")
    dup = np.flatnonzero(np.diff(key[order]) == 0)
    if len(dup):
        k = order[dup[0]]
        raise DuplicateEdge(f"pair ({lo[k]}, {hi[k]}) appears more than once")

    rows = np.concatenate([lo, hi])
    cols = np.concatenate([hi, lo])
    vals = np.concatenate([w, w])
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    counts = np.bincount(rows, minlength=n)
    isolated = np.flatnonzero(counts == 0)
    if len(isolated):
        raise IsolatedVertex(f"vertex {isolated[0]} has no incident edge")
    row_offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=row_offsets[1:])
    degrees = _row_sums(row_offsets, vals)
    return SparseGraph(int(n), row_offsets, cols, vals, degrees)


def from_scipy(matrix) -> SparseGraph:
    """Build from a symmetric scipy sparse matrix (upper triangle is read)."""
    import scipy.sparse as sp

    coo = sp.triu(sp.coo_matrix(matrix), k=0).tocoo()
    keep = coo.data != 0
    n = matrix.shape[0]
    return from_edges(coo.row[keep], coo.col[keep], coo.data[keep], n=n)


def load_edge_list(stream: TextIO | Iterable[str]) -> SparseGraph:
    """Parse ``u v w`` lines; blank lines and ``#`` comments are skipped."""
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    us, vs, ws = [], [], []
    for lineno, line in enumerate(stream, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"expected 'u v w', got {line!r}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
            x = float(parts[2])
        except ValueError:
            raise ParseError(f"cannot parse {line!r}", lineno) from None
        if a < 0 or b < 0:
            raise ParseError("vertex ids must be nonnegative", lineno)
        us.append(a)
        vs.append(b)
        ws.append(x)
    if not us:
        raise ParseError("no edges")
    return from_edges(us, vs, ws)


def dump_edge_list(graph: SparseGraph, stream: TextIO) -> None:
    """Write each unordered pair once with ``u < v``, rows sorted."""
    u, v, w = graph.edges()
    for a, b, x in zip(u.tolist(), v.tolist(), w.tolist()):
        stream.write(f"{a} {b} {x!r}\n")


def read_edge_list(path) -> SparseGraph:
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh)


def write_edge_list(graph: SparseGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        dump_edge_list(graph, fh)


def validate(graph: SparseGraph) -> ValidationReport:
    """Re-check every structural invariant on the stored arrays."""
    rep = ValidationReport()
    n = graph.n
    off, cols, w, deg = graph.row_offsets, graph.col_indices, graph.weights, graph.degrees
    if n < 1 or len(off) != n + 1 or off[0] != 0 or off[-1] != len(cols) or len(w) != len(cols):
        rep.add("SHAPE", None, "inconsistent array lengths")
        return rep
    if np.any(np.diff(off) < 0):
        rep.add("SHAPE", None, "row offsets decrease")
        return rep
    if len(cols) and (cols.min() < 0 or cols.max() >= n):
        rep.add("SHAPE", None, "column index out of range")
        return rep

    rows = np.repeat(np.arange(n), np.diff(off))
    for k in np.flatnonzero(rows == cols):
        rep.add("SELF_LOOP", int(rows[k]), "self-loop stored")
    for k in np.flatnonzero(~(w > 0) | ~np.isfinite(w)):
        rep.add("NONPOSITIVE", (int(rows[k]), int(cols[k])), f"weight {w[k]!r}")
    same_row = rows[1:] == rows[:-1]
    for k in np.flatnonzero(same_row & (cols[1:] <= cols[:-1])):
        rep.add("ORDER", int(rows[k]), "column indices not strictly increasing")

    # symmetry: the transpose, sorted the same way, must be bit-identical
    order = np.lexsort((rows, cols))
    if not (np.array_equal(cols[order], rows) and np.array_equal(rows[order], cols)):
        rep.add("SYMMETRY", None, "sparsity pattern is not symmetric")
    else:
        for k in np.flatnonzero(w[order] != w):
            rep.add("SYMMETRY", (int(rows[k]), int(cols[k])), "w_ij != w_ji")

    counts = np.diff(off)
    for i in np.flatnonzero(counts == 0):
        rep.add("ISOLATED", int(i), "no incident edge")
    if len(deg) != n:
        rep.add("DEGREE", None, "degree vector has wrong length")
    else:
        sums = _row_sums(off, w)
        for i in np.flatnonzero(deg <= 0):
            if counts[i]:
                rep.add("ISOLATED", int(i), "zero degree")
        bad = np.abs(deg - sums) > 1e-12 * np.abs(sums)
        for i in np.flatnonzero(bad):
            rep.add("DEGREE", int(i), "degree differs from row weight sum")
    return rep


def laplacian_entry(graph: SparseGraph, i: int, j: int) -> float:
    n = graph.n
    if not (0 <= i < n and 0 <= j < n):
        raise IndexOutOfRange(f"({i}, {j}) outside [0, {n})")
    if i == j:
        return float(graph.degrees[i])
    cols, w = graph.row(i)
    k = np.searchsorted(cols, j)
    if k < len(cols) and cols[k] == j:
        return -float(w[k])
    return 0.0

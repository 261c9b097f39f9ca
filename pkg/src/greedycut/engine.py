"""Greedy normalized-cut clustering by repeated neighbor-cluster merges.

Every vertex starts as its own cluster. Each step merges the pair of
adjacent clusters whose union lowers the normalized cut

    f = sum_k  cut(k) / vol(k)

the most, until ``c`` clusters remain. Per cluster the engine keeps its cut
``l_self`` (= y^T L y), its volume ``d_mass`` (= y^T D y) and the cross
values ``l_ij`` (= y_i^T L y_j, minus the weight between the two) to every
adjacent cluster, so the gain of any candidate merge costs O(1)::

    delta = l_ii/d_i + l_jj/d_j - (l_ii + l_jj + 2 l_ij) / (d_i + d_j)

``delta`` is never negative, so the objective sequence only goes down.
"""

from __future__ import annotations

import json
import math
import os
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _core
from .errors import (
    AuditError,
    DeadCluster,
    InvalidArgs,
    NonPositiveDegree,
    NotNeighbors,
    QueueEmpty,
    QueueExhausted,
)
from .graph import SparseGraph, validate

__all__ = [
    "ClusterRecord",
    "MergeStep",
    "MergeTrace",
    "Partition",
    "RunOptions",
    "RunReport",
    "EngineState",
    "delta_formula",
    "init_state",
    "best_pair",
    "merge",
    "run",
    "objective_of_state",
]


def delta_formula(l_ii, l_jj, l_ij, d_i, d_j):
    """Decrease of the normalized cut when clusters i and j are merged."""
    if not (d_i > 0 and d_j > 0):
        raise NonPositiveDegree(f"cluster volumes must be positive, got {d_i}, {d_j}")
    return l_ii / d_i + l_jj / d_j - (l_ii + l_jj + 2.0 * l_ij) / (d_i + d_j)


@dataclass(frozen=True)
class ClusterRecord:
    id: int
    l_self: float
    d_mass: float
    neighbors: dict
    members: list
    alive: bool


@dataclass(frozen=True)
class MergeStep:
    step: int
    i: int
    j: int
    e: int
    delta: float
    objective_after: float


class MergeTrace:
    """Merges in execution order, stored column-wise.

    ``objective_before`` is the objective ahead of the first merge. Indexing
    and iteration yield :class:`MergeStep` rows.
    """

    def __init__(self, i, j, e, delta, objective_after, objective_before):
        self.i = np.asarray(i, dtype=np.int64)
        self.j = np.asarray(j, dtype=np.int64)
        self.e = np.asarray(e, dtype=np.int64)
        self.delta = np.asarray(delta, dtype=np.float64)
        self.objective_after = np.asarray(objective_after, dtype=np.float64)
        self.objective_before = float(objective_before)

    def __len__(self):
        return len(self.i)

    def __getitem__(self, k):
        if k < 0:
            k += len(self)
        return MergeStep(
            k + 1,
            int(self.i[k]),
            int(self.j[k]),
            int(self.e[k]),
            float(self.delta[k]),
            float(self.objective_after[k]),
        )

    def __iter__(self):
        return (self[k] for k in range(len(self)))

    @property
    def steps(self):
        return tuple(self)

    def __eq__(self, other):
        if not isinstance(other, MergeTrace):
            return NotImplemented
        return self.objective_before == other.objective_before and all(
            np.array_equal(getattr(self, a), getattr(other, a))
            for a in ("i", "j", "e", "delta", "objective_after")
        )

    def __repr__(self):
        return f"MergeTrace({len(self)} merges, final={self.objectives()[-1]!r})"

    def objectives(self):
        """Objective values, starting with the initial one."""
        return [self.objective_before] + self.objective_after.tolist()

    def pairs(self):
        return list(zip(self.i.tolist(), self.j.tolist(), self.e.tolist()))

    def to_text(self):
        """One merge per line: ``step i j e delta objective``."""
        rows = zip(
            self.i.tolist(),
            self.j.tolist(),
            self.e.tolist(),
            self.delta.tolist(),
            self.objective_after.tolist(),
        )
        return "".join(
            f"{s} {i} {j} {e} {d!r} {o!r}\n" for s, (i, j, e, d, o) in enumerate(rows, 1)
        )


@dataclass(frozen=True)
class Partition:
    labels: np.ndarray

    @property
    def n_clusters(self):
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    def to_text(self):
        return "".join(f"{v}\n" for v in self.labels.tolist())


@dataclass(frozen=True)
class RunOptions:
    """``selection`` is ``"max"`` (greedy descent) or ``"min"`` (ablation only).
    ``disconnected`` is ``"fallback"`` or ``"strict"``. ``audit`` turns on a
    direct recomputation of the objective every ``ceil(n/100)`` merges; when
    left as None it follows the ``GGC_AUDIT`` environment variable."""

    selection: str = "max"
    disconnected: str = "fallback"
    audit: bool | None = None
    audit_every: int | None = None

    def __post_init__(self):
        if self.selection not in ("max", "min"):
            raise InvalidArgs(f"selection must be 'max' or 'min', got {self.selection!r}")
        if self.disconnected not in ("fallback", "strict"):
            raise InvalidArgs(
                f"disconnected must be 'fallback' or 'strict', got {self.disconnected!r}"
            )

    @property
    def audit_enabled(self):
        if self.audit is not None:
            return self.audit
        return os.environ.get("GGC_AUDIT", "") not in ("", "0")


@dataclass
class RunReport:
    n: int
    c: int
    k1_init: float
    k1_max: int
    merges_executed: int
    fallback_merges: int
    objective_trace: list
    queue_op_count: int
    queue_inserts: int
    queue_deletes: int
    queue_extracts: int
    min_inserted_delta: float
    config: dict
    wall_time_ms: dict = field(default_factory=dict)

    def to_dict(self, timings=True):
        d = asdict(self)
        if not timings:
            d.pop("wall_time_ms")
        return d

    def to_json(self, timings=True):
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True)


class EngineState:
    """Live clusters, their aggregates, and the candidate-merge queue."""

    def __init__(self, graph: SparseGraph, selection="max"):
        if selection not in ("max", "min"):
            raise InvalidArgs(f"selection must be 'max' or 'min', got {selection!r}")
        self.graph = graph
        self.n = graph.n
        self.selection = selection
        self.core = _core.allocate(graph.n, graph.n_edges)
        self._sign = -1.0 if selection == "max" else 1.0
        cap = max(graph.n - 1, 0)
        self._tr_i = np.zeros(cap, dtype=np.int64)
        self._tr_j = np.zeros(cap, dtype=np.int64)
        self._tr_e = np.zeros(cap, dtype=np.int64)
        self._tr_delta = np.zeros(cap)
        self._tr_obj = np.zeros(cap)
        self.n_merges = 0
        self.fallback_merges = 0
        _core.init(
            self.core,
            graph.row_offsets.astype(np.int64),
            graph.col_indices.astype(np.int64),
            graph.weights,
            graph.degrees,
            self._sign,
        )

    # -- scalar views
    @property
    def active_count(self):
        return int(self.core.ints[_core.ACTIVE])

    @property
    def next_id(self):
        return int(self.core.ints[_core.NEXT_ID])

    @property
    def objective(self):
        f = self.core.floats
        return float(f[_core.OBJ] + f[_core.COMP])

    @property
    def queue_op_count(self):
        return int(self.core.ints[_core.QOPS])

    def alive_ids(self):
        top = self.next_id
        return np.flatnonzero(self.core.alive[:top]).tolist()

    def is_alive(self, i):
        return 0 <= i < self.next_id and bool(self.core.alive[i])

    def neighbors(self, i):
        """Live neighbor map of cluster ``i``: id -> l_ij, sorted by id."""
        S = self.core
        s, ln = S.nb_start[i], S.nb_len[i]
        ids = S.pool_id[s : s + ln]
        vals = S.pool_val[s : s + ln]
        keep = S.alive[ids].astype(bool) if ln else np.zeros(0, dtype=bool)
        out = dict(zip(ids[keep].tolist(), vals[keep].tolist()))
        return dict(sorted(out.items())) if self.is_alive(i) else {}

    def members(self, i):
        S = self.core
        out = []
        v = S.head[i]
        while v != -1 and len(out) < S.size[i]:
            out.append(int(v))
            v = S.nxt[v]
        return out

    def record(self, i) -> ClusterRecord:
        if not (0 <= i < self.next_id):
            raise DeadCluster(f"cluster {i} was never created")
        S = self.core
        return ClusterRecord(
            id=int(i),
            l_self=float(S.l_self[i]),
            d_mass=float(S.d_mass[i]),
            neighbors=self.neighbors(i),
            members=self.members(i),
            alive=self.is_alive(i),
        )

    def queue_entries(self):
        """The live candidate merges ``(delta, i, j)``, sorted ascending."""
        S = self.core
        size = S.ints[_core.HSIZE]
        pair = S.hpair[:size]
        hi, hj = pair >> 32, pair & 0xFFFFFFFF
        live = (S.alive[hi] & S.alive[hj]).astype(bool)
        deltas = (self._sign * S.hkey[:size][live]).tolist()
        return sorted(zip(deltas, hi[live].tolist(), hj[live].tolist()))

    def labels(self) -> np.ndarray:
        """Labels numbered by first appearance over vertex order."""
        owner = np.empty(self.n, dtype=np.int64)
        _core.owners(self.core, owner)
        _, first, inv = np.unique(owner, return_index=True, return_inverse=True)
        rank = np.empty(len(first), dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(len(first))
        return rank[inv]

    def trace(self) -> MergeTrace:
        k = self.n_merges
        return MergeTrace(
            self._tr_i[:k].copy(),
            self._tr_j[:k].copy(),
            self._tr_e[:k].copy(),
            self._tr_delta[:k].copy(),
            self._tr_obj[:k].copy(),
            float(self.n),
        )

    def _record_merge(self, i, j, e, dlt):
        k = self.n_merges
        self._tr_i[k], self._tr_j[k], self._tr_e[k] = i, j, e
        self._tr_delta[k] = dlt
        self._tr_obj[k] = self.objective
        self.n_merges += 1


def init_state(graph: SparseGraph, selection="max") -> EngineState:
    """Singleton clusters and one queue entry per edge."""
    rep = validate(graph)
    if not rep.ok:
        code, where, msg = rep.issues[0]
        raise InvalidArgs(f"invalid graph: {code} at {where}: {msg}")
    return EngineState(graph, selection)


def best_pair(state: EngineState):
    """The queue's extremum as ``(i, j, delta)``; ties go to the smaller pair."""
    S = state.core
    if not _core.peek(S):
        raise QueueEmpty("no neighboring clusters left")
    key, i, j = _core.entry(S, 0)
    return int(i), int(j), float(state._sign * key)


def merge(state: EngineState, i: int, j: int) -> int:
    """Merge two adjacent live clusters; returns the new cluster id."""
    for x in (i, j):
        if not state.is_alive(x):
            raise DeadCluster(f"cluster {x} is not alive")
    if i == j:
        raise NotNeighbors("cannot merge a cluster with itself")
    if not _core.lookup(state.core, i, j) < 0.0:
        raise NotNeighbors(f"clusters {i} and {j} share no edge")
    if i > j:
        i, j = j, i
    e, dlt, _ = _core.merge(state.core, i, j)
    state._record_merge(i, j, int(e), float(dlt))
    return int(e)


def objective_of_state(state: EngineState) -> float:
    """Direct sum of ``l_self / d_mass`` over live clusters."""
    S = state.core
    alive = np.flatnonzero(S.alive[: state.next_id])
    return math.fsum((S.l_self[alive] / S.d_mass[alive]).tolist())


def _audit(state: EngineState):
    direct = objective_of_state(state)
    running = state.objective
    if abs(direct - running) > 1e-9 * max(1.0, abs(direct)):
        raise AuditError(
            f"running objective {running!r} drifted from direct value {direct!r}"
            f" after {state.n_merges} merges"
        )


def run(graph: SparseGraph, c: int, options: RunOptions | None = None, callback=None):
    """Cluster ``graph`` into ``c`` groups.

    Returns ``(Partition, MergeTrace, RunReport)``. When fewer neighbor pairs
    exist than merges are needed (more than ``c`` connected components),
    ``options.disconnected == "fallback"`` keeps merging the best
    non-adjacent pair while ``"strict"`` raises :class:`QueueExhausted`.

    ``callback(state)``, if given, is invoked at every audit point (every
    ``options.audit_every`` merges, default ``ceil(n/100)``) and at the end.
    """
    options = options or RunOptions()
    n = graph.n
    if not isinstance(c, (int, np.integer)) or not (1 <= c <= n):
        raise InvalidArgs(f"c must be an integer in [1, {n}], got {c!r}")
    c = int(c)
    audit = options.audit_enabled
    chunk = options.audit_every or math.ceil(n / 100)
    if not (audit or callback):
        chunk = n

    t0 = time.perf_counter()
    state = init_state(graph, options.selection)
    t1 = time.perf_counter()
    k1_init = 2.0 * graph.n_edges / n

    exhausted = False
    while state.active_count > c and not exhausted:
        done, exhausted = _core.run_loop(
            state.core, c, chunk,
            state._tr_i, state._tr_j, state._tr_e, state._tr_delta, state._tr_obj,
            state.n_merges,
        )
        state.n_merges += int(done)
        if audit:
            _audit(state)
        if callback is not None:
            callback(state)
    t2 = time.perf_counter()

    if exhausted and state.active_count > c:
        if options.disconnected == "strict":
            raise QueueExhausted(
                f"no neighboring clusters left with {state.active_count} > {c} clusters",
                partition=Partition(state.labels()),
                trace=state.trace(),
            )
        while state.active_count > c:
            i, j = _core.best_unlinked_pair(state.core)
            e, dlt, _ = _core.merge(state.core, i, j)
            state._record_merge(int(i), int(j), int(e), float(dlt))
            state.fallback_merges += 1
        if audit:
            _audit(state)
        if callback is not None:
            callback(state)
    t3 = time.perf_counter()

    labels = state.labels()
    trace = state.trace()
    t4 = time.perf_counter()

    ints, floats = state.core.ints, state.core.floats
    report = RunReport(
        n=n,
        c=c,
        k1_init=k1_init,
        k1_max=int(ints[_core.K1_MAX]),
        merges_executed=state.n_merges,
        fallback_merges=state.fallback_merges,
        objective_trace=trace.objectives(),
        queue_op_count=int(ints[_core.QOPS]),
        queue_inserts=int(ints[_core.INSERTS]),
        queue_deletes=int(ints[_core.DELETES]),
        queue_extracts=int(ints[_core.EXTRACTS]),
        min_inserted_delta=float(floats[_core.MIN_DELTA]),
        config={
            "selection": options.selection,
            "disconnected": options.disconnected,
            "audit": bool(audit),
            "seed_free": True,
        },
        wall_time_ms={
            "init": (t1 - t0) * 1e3,
            "merge": (t2 - t1) * 1e3,
            "fallback": (t3 - t2) * 1e3,
            "labels": (t4 - t3) * 1e3,
            "total": (t4 - t0) * 1e3,
        },
    )
    return Partition(labels), trace, report

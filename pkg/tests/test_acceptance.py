"""Acceptance criteria, one test per criterion.

Every test prints a single ``PASS``/``FAIL`` line with the measured values,
then asserts. Run with ``pytest tests/test_acceptance.py -v`` (the lines are
written with output capture disabled so they always show).
"""

import gc
import itertools
import math
import time

import numpy as np
import pytest
from sklearn.metrics import normalized_mutual_info_score

from greedycut.cli import bench_graph, queue_bound
from greedycut.engine import RunOptions, run
from greedycut.graph import from_edges
from greedycut.metrics import acc, ari, ncut, nmi
from greedycut.neighbors import knn_graph
from greedycut.oracle import exhaustive_best_ncut, naive_run
from greedycut.synthetic import blobs, grid_graph, rings


@pytest.fixture
def report_line(capsys):
    def emit(number, ok, text):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {text}")

    return emit


def _random_graphs(count, seed, n_range=(20, 201), ks=(3, 5, 10)):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(*n_range))
        k = int(rng.choice(ks))
        x = rng.standard_normal((n, int(rng.integers(2, 9))))
        yield knn_graph(x, k), int(rng.integers(1, 11))


def _disconnected_graph():
    u = [0, 1, 3, 4, 6, 8]
    v = [1, 2, 4, 5, 7, 9]
    return from_edges(u, v, [1.0, 2.0, 0.5, 1.5, 1.0, 3.0])


def _all_runs():
    """Graphs used wherever a criterion says "every test run"."""
    for g, c in _random_graphs(100, seed=2024):
        yield g, c
    yield grid_graph(30, 30), 4
    yield _disconnected_graph(), 1
    x, _ = blobs(5, 500, separation=8.0, seed=0)
    yield knn_graph(x, 10), 5
    x, _ = rings(1000, seed=0)
    yield knn_graph(x, 10), 2
    yield bench_graph("blobs", 20000, 10, 10), 10


# 1


def test_oracle_trace_equivalence(report_line):
    t0 = time.perf_counter()
    mismatches, worst_obj, worst_delta = 0, 0.0, 0.0
    for g, c in _random_graphs(100, seed=2024):
        p1, t1, _ = run(g, c)
        p2, t2 = naive_run(g, c)
        same = t1.pairs() == t2.pairs() and np.array_equal(p1.labels, p2.labels)
        mismatches += not same
        if same and len(t1):
            worst_obj = max(worst_obj, float(np.abs(t1.objective_after - t2.objective_after).max()))
            worst_delta = max(worst_delta, float(np.abs(t1.delta - t2.delta).max()))
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and worst_obj <= 1e-9 and elapsed < 120
    report_line(
        1, ok,
        f"100 graphs, {mismatches} sequence/label mismatches, max |obj diff| {worst_obj:.2e}"
        f" (tol 1e-9), max |delta diff| {worst_delta:.2e}, {elapsed:.1f} s (limit 120 s)",
    )
    assert ok


# 2


def test_telescoping_and_monotonicity(report_line):
    worst_step, worst_rise, lowest, runs = 0.0, 0.0, math.inf, 0
    for g, c in _all_runs():
        _, trace, _ = run(g, c)
        obj = np.array(trace.objectives())
        if len(trace):
            worst_step = max(worst_step, float(np.abs(obj[:-1] - obj[1:] - trace.delta).max()))
            worst_rise = max(worst_rise, float(np.max(obj[1:] - obj[:-1])))
        lowest = min(lowest, float(obj[-1]))
        runs += 1
    ok = worst_step <= 1e-10 and worst_rise <= 0.0 and lowest >= -1e-12
    report_line(
        2, ok,
        f"{runs} runs, max |f_before - f_after - delta| {worst_step:.2e} (tol 1e-10),"
        f" max increase {worst_rise:.2e}, min final objective {lowest:.3e} (>= -1e-12)",
    )
    assert ok


# 3


def test_delta_nonnegativity(report_line):
    inserts, lowest = 0, math.inf
    for g, c in _all_runs():
        _, _, rep = run(g, c)
        inserts += rep.queue_inserts
        lowest = min(lowest, rep.min_inserted_delta)
    ok = inserts >= 100_000 and lowest >= -1e-12
    report_line(
        3, ok, f"{inserts} queue insertions, min inserted delta {lowest:.3e} (>= -1e-12)"
    )
    assert ok


# 4


def test_conservation_at_audit_points(report_line):
    worst_mass, worst_cut, points = 0.0, 0.0, 0

    def check(g):
        total_deg = math.fsum(g.degrees.tolist())
        u, v, w = g.edges()

        def callback(state):
            nonlocal worst_mass, worst_cut, points
            S = state.core
            alive = np.flatnonzero(S.alive[: state.next_id])
            mass = math.fsum(S.d_mass[alive].tolist())
            worst_mass = max(worst_mass, abs(mass - total_deg) / total_deg)
            lab = state.labels()
            cut = math.fsum(w[lab[u] != lab[v]].tolist())
            ls = math.fsum(S.l_self[alive].tolist())
            scale = max(2.0 * cut, 1e-300)
            worst_cut = max(worst_cut, 0.0 if ls == 2.0 * cut else abs(ls - 2.0 * cut) / scale)
            points += 1

        return callback

    for g, c in _all_runs():
        run(g, c, RunOptions(audit=True), callback=check(g))
    ok = worst_mass <= 1e-9 and worst_cut <= 1e-9
    report_line(
        4, ok,
        f"{points} audit points, max rel. mass error {worst_mass:.2e},"
        f" max rel. cut-identity error {worst_cut:.2e} (tol 1e-9)",
    )
    assert ok


# 5


def test_determinism(report_line):
    g = bench_graph("blobs", 5000, 10, 10)
    outputs = set()
    for _ in range(20):
        part, trace, rep = run(g, 10)
        blob = part.to_text() + "\n" + trace.to_text() + "\n" + rep.to_json(timings=False)
        outputs.add(blob.encode())
    ok = len(outputs) == 1
    report_line(5, ok, f"20 runs on n=5000, {len(outputs)} distinct label/trace/report outputs")
    assert ok


# 6


def test_greedy_vs_exhaustive(report_line):
    rng = np.random.default_rng(7)
    below, equal, total = 0, 0, 0
    while total < 50:
        n = int(rng.integers(5, 11))
        x = rng.standard_normal((n, 2))
        g = knn_graph(x, int(rng.integers(2, 4)))
        c = int(rng.choice([2, 3]))
        _, best = exhaustive_best_ncut(g, c)
        part, _, _ = run(g, c)
        greedy = ncut(g, part.labels)
        below += greedy < best - 1e-12
        equal += abs(greedy - best) <= 1e-12
        total += 1
    ok = below == 0 and equal >= 25
    report_line(
        6, ok,
        f"50 graphs (n<=10, c in {{2,3}}): greedy below optimum {below} times,"
        f" equal to optimum {equal}/50 (need >= 25)",
    )
    assert ok


# 7


def _brute_acc(truth, pred):
    """Best matching over all label permutations (tiny label sets only)."""
    lt, lp = np.unique(truth), np.unique(pred)
    k = max(len(lt), len(lp))
    best = 0
    for perm in itertools.permutations(range(k), len(lp)):
        mapping = dict(zip(lp.tolist(), perm))
        mapped = np.array([mapping[v] for v in pred.tolist()])
        ti = np.searchsorted(lt, truth)
        best = max(best, int(np.sum(mapped == ti)))
    return best / len(truth)


def test_quality_on_synthetics(report_line):
    x, y = blobs(5, 500, separation=8.0, sigma=1.0, seed=0)
    part, _, _ = run(knn_graph(x, 10), 5)
    b_acc, b_nmi = acc(y, part.labels), nmi(y, part.labels)
    b_acc_ref = _brute_acc(y, part.labels)
    b_nmi_ref = normalized_mutual_info_score(y, part.labels)

    x, y = rings(1000, n_rings=2, radius_ratio=2.0, noise=0.05, seed=0)
    part, _, _ = run(knn_graph(x, 10), 2)
    r_acc = acc(y, part.labels)
    r_acc_ref = _brute_acc(y, part.labels)

    agree = (
        abs(b_acc - b_acc_ref) <= 1e-12
        and abs(b_nmi - b_nmi_ref) <= 1e-12
        and abs(r_acc - r_acc_ref) <= 1e-12
    )
    ok = b_acc >= 0.99 and b_nmi >= 0.99 and r_acc >= 0.90 and agree
    report_line(
        7, ok,
        f"blobs ACC {b_acc:.4f} NMI {b_nmi:.4f} (>= 0.99); rings ACC {r_acc:.4f} (>= 0.90);"
        f" brute-force metric agreement {agree}",
    )
    assert ok


# 8


def test_speed_and_scaling(report_line):
    run(grid_graph(4, 4), 2)  # compile warm-up, not timed

    g = bench_graph("blobs", 60000, 10, 10)
    t0 = time.perf_counter()
    _, _, rep = run(g, 10)
    t60 = time.perf_counter() - t0
    bound_ok = rep.queue_op_count <= queue_bound(g.n, 10, rep.k1_max, rep.k1_init)

    del g
    medians, rows = {}, []
    for n in (25000, 50000, 100000):
        g = bench_graph("blobs", n, 10, 10)
        gc.collect()
        times = []
        for _ in range(5):
            t0 = time.perf_counter()
            _, _, rep = run(g, 10)
            times.append(time.perf_counter() - t0)
            bound = queue_bound(g.n, 10, rep.k1_max, rep.k1_init)
            bound_ok &= rep.queue_op_count <= bound
        medians[n] = float(np.median(times))
        rows.append(f"n={n}: {medians[n] * 1e3:.0f} ms, ops/bound {rep.queue_op_count / bound:.3f}")
        del g
    r1 = medians[50000] / medians[25000]
    r2 = medians[100000] / medians[50000]
    ok = t60 <= 10.0 and r1 <= 2.6 and r2 <= 2.6 and bound_ok
    report_line(
        8, ok,
        f"n=60000 c=10 in {t60:.2f} s (<= 10 s); ratios {r1:.2f}, {r2:.2f} (<= 2.6);"
        f" queue_ops within 8(n-c)k1_max log2(n k1_init) on every run: {bound_ok}; "
        + "; ".join(rows),
    )
    assert ok


# 9


def test_metric_fixtures(report_line):
    a, b = [0, 0, 1, 1], [0, 1, 0, 1]
    checks = {
        "nmi identical": (nmi([0, 1, 1, 2], [0, 1, 1, 2]), 1.0),
        "nmi crossed": (nmi(a, b), 0.0),
        "nmi single clusters": (nmi([0, 0, 0], [0, 0, 0]), 1.0),
        "ari identical": (ari([0, 1, 1, 2], [0, 1, 1, 2]), 1.0),
        "ari crossed": (ari(a, b), -0.5),
        "ari constant B": (ari([0, 0, 1, 2], [3, 3, 3, 3]), 0.0),
        "acc relabel": (acc([1, 1, 2], [2, 2, 1]), 1.0),
        "acc crossed": (acc(a, b), 0.5),
        "acc identical": (acc([0, 1, 2, 2], [0, 1, 2, 2]), 1.0),
    }
    bad = [k for k, (got, want) in checks.items() if abs(got - want) > 1e-12]
    ok = not bad
    report_line(9, ok, f"{len(checks) - len(bad)}/{len(checks)} fixtures within 1e-12 {bad or ''}")
    assert ok

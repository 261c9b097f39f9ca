"""Command-line front end: ``greedycut {build-graph,cluster,eval,oracle,bench}``.

Exit codes: 0 success, 2 usage or input error, 3 strict-mode exhaustion,
1 when ``bench`` finds a scaling or queue-operation bound violated.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time

import numpy as np

from . import engine, metrics, neighbors, oracle, synthetic
from .errors import GreedyCutError, InvalidArgs, QueueExhausted
from .graph import read_edge_list, write_edge_list

EXIT_OK, EXIT_BOUND, EXIT_USAGE, EXIT_EXHAUSTED = 0, 1, 2, 3
SCALING_LIMIT = 2.6
QUEUE_CONSTANT = 8


def read_labels(path) -> np.ndarray:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                v = int(line)
            except ValueError:
                raise InvalidArgs(f"{path}:{lineno}: not an integer label: {line!r}") from None
            if v < 0:
                raise InvalidArgs(f"{path}:{lineno}: negative label {v}")
            out.append(v)
    return np.asarray(out, dtype=np.int64)


def write_labels(labels, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("".join(f"{v}\n" for v in np.asarray(labels).tolist()))


def _write_text(text, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _positive_int(s):
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _int_list(s):
    try:
        vals = [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from None
    if not vals or min(vals) < 2:
        raise argparse.ArgumentTypeError("sizes must be integers >= 2")
    return vals


def _emit_json(obj):
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


# -- commands


def cmd_build_graph(args) -> int:
    x = neighbors.read_features(args.features)
    if args.zscore:
        x = neighbors.zscore(x)
    k = args.k if args.k is not None else neighbors.default_k(x.shape[0], args.clusters)
    g = neighbors.knn_graph(x, k, method=args.method)
    write_edge_list(g, args.out)
    _emit_json({"n": g.n, "edges": g.n_edges, "k": k})
    return EXIT_OK


def _options(args):
    return engine.RunOptions(selection=args.selection, disconnected=args.disconnected)


def cmd_cluster(args) -> int:
    g = read_edge_list(args.graph)
    try:
        part, trace, report = engine.run(g, args.clusters, _options(args))
    except QueueExhausted as exc:
        if exc.partition is not None:
            write_labels(exc.partition.labels, args.out + ".partial")
        if args.trace and exc.trace is not None:
            _write_text(exc.trace.to_text(), args.trace + ".partial")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    write_labels(part.labels, args.out)
    if args.report:
        _write_text(report.to_json(timings=not args.no_timings) + "\n", args.report)
    if args.trace:
        _write_text(trace.to_text(), args.trace)
    return EXIT_OK


def cmd_eval(args) -> int:
    pred, truth = read_labels(args.pred), read_labels(args.truth)
    out = {
        "acc": metrics.acc(truth, pred),
        "nmi": metrics.nmi(truth, pred),
        "ari": metrics.ari(truth, pred),
    }
    if args.graph:
        out["ncut"] = metrics.ncut(read_edge_list(args.graph), pred)
    _emit_json(out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = read_edge_list(args.graph)
    if args.mode == "exhaustive":
        part, value = oracle.exhaustive_best_ncut(g, args.clusters)
        if args.out:
            write_labels(part.labels, args.out)
        _emit_json({"mode": "exhaustive", "ncut": value, "labels": part.labels.tolist()})
        return EXIT_OK
    try:
        part, trace = oracle.naive_run(g, args.clusters, _options(args))
    except QueueExhausted as exc:
        if args.out and exc.partition is not None:
            write_labels(exc.partition.labels, args.out + ".partial")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    if args.out:
        write_labels(part.labels, args.out)
    if args.trace:
        _write_text(trace.to_text(), args.trace)
    _emit_json(
        {"mode": "naive", "ncut": trace.objectives()[-1], "merges": len(trace)}
    )
    return EXIT_OK


def bench_graph(generator, n, k, c, seed=0):
    """Synthetic k-NN graph (or lattice) with about ``n`` vertices."""
    if generator == "blobs":
        x, _ = synthetic.blobs(c, -(-n // c), seed=seed)
        return neighbors.knn_graph(x[:n], k)
    if generator == "rings":
        x, _ = synthetic.rings(n, n_rings=c, seed=seed)
        return neighbors.knn_graph(x, k)
    if generator == "grid":
        rows = max(1, int(math.isqrt(n)))
        return synthetic.grid_graph(rows, max(2, n // rows))
    raise InvalidArgs(f"unknown generator {generator!r}")


def queue_bound(n, c, k1_max, k1_init, constant=QUEUE_CONSTANT):
    return constant * (n - c) * k1_max * math.log2(n * k1_init)


def cmd_bench(args) -> int:
    # compile and warm the engine before anything is timed
    engine.run(synthetic.grid_graph(4, 4), 2)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["n", "median_ms", "queue_ops", "k1_init", "k1_max", "queue_bound"])
    ok = True
    medians = []
    for n in args.sizes:
        try:
            g = bench_graph(args.generator, n, args.k, args.clusters, args.seed)
        except GreedyCutError as exc:
            writer.writerow([n, "", "", "", "", ""])
            print(f"error: n={n}: {exc}", file=sys.stderr)
            ok = False
            continue
        times, report = [], None
        for _ in range(args.trials):
            t0 = time.perf_counter()
            _, _, report = engine.run(g, args.clusters)
            times.append((time.perf_counter() - t0) * 1e3)
        med = float(np.median(times))
        bound = queue_bound(g.n, args.clusters, report.k1_max, report.k1_init)
        writer.writerow(
            [g.n, f"{med:.3f}", report.queue_op_count, f"{report.k1_init:.6f}",
             report.k1_max, f"{bound:.0f}"]
        )
        sys.stdout.flush()
        if report.queue_op_count > bound:
            print(f"bound violated: n={g.n} queue_ops={report.queue_op_count} > {bound:.0f}",
                  file=sys.stderr)
            ok = False
        medians.append((n, med))
    for (n0, t0), (n1, t1) in zip(medians, medians[1:]):
        if n1 == 2 * n0 and t1 / t0 > SCALING_LIMIT:
            print(f"scaling: t({n1})/t({n0}) = {t1 / t0:.2f} > {SCALING_LIMIT}", file=sys.stderr)
            ok = False
    return EXIT_OK if ok else EXIT_BOUND


# -- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="greedycut", description="Greedy normalized-cut clustering.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build-graph", help="k-NN graph from a TSV feature file")
    b.add_argument("--features", required=True)
    kk = b.add_mutually_exclusive_group(required=True)
    kk.add_argument("--k", type=_positive_int)
    kk.add_argument("--clusters", type=_positive_int, help="pick k = min(50, n // clusters)")
    b.add_argument("--zscore", action="store_true", help="standardize each feature first")
    b.add_argument("--method", choices=["auto", "brute", "kdtree"], default="auto")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_build_graph)

    def engine_flags(q):
        q.add_argument("--selection", choices=["max", "min"], default="max")
        q.add_argument("--disconnected", choices=["fallback", "strict"], default="fallback")

    c = sub.add_parser("cluster", help="run the greedy engine on an edge list")
    c.add_argument("--graph", required=True)
    c.add_argument("--clusters", type=_positive_int, required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--report")
    c.add_argument("--trace")
    c.add_argument("--no-timings", action="store_true", help="omit wall times from the report")
    engine_flags(c)
    c.set_defaults(func=cmd_cluster)

    e = sub.add_parser("eval", help="compare predicted and true labels")
    e.add_argument("--pred", required=True)
    e.add_argument("--truth", required=True)
    e.add_argument("--graph")
    e.set_defaults(func=cmd_eval)

    o = sub.add_parser("oracle", help="slow reference solvers")
    o.add_argument("--mode", choices=["naive", "exhaustive"], required=True)
    o.add_argument("--graph", required=True)
    o.add_argument("--clusters", type=_positive_int, required=True)
    o.add_argument("--out")
    o.add_argument("--trace")
    engine_flags(o)
    o.set_defaults(func=cmd_oracle)

    s = sub.add_parser("bench", help="timing and queue-operation scaling")
    s.add_argument("--sizes", type=_int_list, default=[25000, 50000, 100000])
    s.add_argument("--k", type=_positive_int, default=10)
    s.add_argument("--clusters", type=_positive_int, default=10)
    s.add_argument("--trials", type=_positive_int, default=3)
    s.add_argument("--generator", choices=["blobs", "rings", "grid"], default="blobs")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GreedyCutError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""
Run time and queue work as the graph grows
"""

import math
import time

from greedycut import run
from greedycut.cli import bench_graph, queue_bound
from greedycut.synthetic import grid_graph

run(grid_graph(4, 4), 2)  # compile once before timing

## Blob graphs of increasing size, 10 clusters, k = 10
prev = None
for n in (25000, 50000, 100000):
    g = bench_graph("blobs", n, 10, 10)
    t0 = time.perf_counter()
    _, _, rep = run(g, 10)
    ms = (time.perf_counter() - t0) * 1e3
    bound = queue_bound(g.n, 10, rep.k1_max, rep.k1_init)
    ratio = "" if prev is None else "  x%.2f" % (ms / prev)
    print("n=%6d  %7.0f ms%s  k1_init %.2f  k1_max %d  queue ops %d (%.1f%% of bound)" % (
        n, ms, ratio, rep.k1_init, rep.k1_max, rep.queue_op_count,
        100 * rep.queue_op_count / bound))
    print("   phases:", {k: round(v) for k, v in rep.wall_time_ms.items()})
    prev = ms

"""
Checking the fast engine against slow references
"""

import numpy as np

from greedycut import exhaustive_best_ncut, knn_graph, naive_run, ncut, run

rng = np.random.default_rng(0)

## The naive engine rescans every cluster pair each step
x = rng.standard_normal((80, 3))
g = knn_graph(x, 5)
fast_part, fast_trace, _ = run(g, 4)
slow_part, slow_trace = naive_run(g, 4)
print("same merges:", fast_trace.pairs() == slow_trace.pairs())
print("same labels:", np.array_equal(fast_part.labels, slow_part.labels))
print("max objective gap:", np.abs(fast_trace.objective_after - slow_trace.objective_after).max())

## On tiny graphs, every partition can be scored
hits = 0
for trial in range(20):
    g = knn_graph(rng.standard_normal((9, 2)), 3)
    part, _, _ = run(g, 3)
    best_part, best = exhaustive_best_ncut(g, 3)
    greedy = ncut(g, part.labels)
    hits += abs(greedy - best) <= 1e-12
    print("greedy %.4f  optimum %.4f" % (greedy, best))
print(hits, "of 20 greedy runs reached the optimum")

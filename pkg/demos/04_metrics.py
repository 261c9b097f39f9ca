"""
Scoring a clustering: normalized cut, NMI, ARI and accuracy
"""

import numpy as np

from greedycut import acc, ari, knn_graph, ncut, nmi, run
from greedycut.synthetic import blobs, rings

## Two crossed partitions of four points
a, b = [0, 0, 1, 1], [0, 1, 0, 1]
print("nmi", nmi(a, b), "ari", ari(a, b), "acc", acc(a, b))

## Accuracy ignores label names
print(acc([1, 1, 2], [2, 2, 1]))

## Blobs and rings
for name, (x, y), c in [
    ("blobs", blobs(5, 500, separation=8.0, seed=0), 5),
    ("rings", rings(1000, n_rings=2, radius_ratio=2.0, noise=0.05, seed=0), 2),
]:
    g = knn_graph(x, 10)
    part, trace, _ = run(g, c)
    print(name, "acc %.4f nmi %.4f ari %.4f" % (
        acc(y, part.labels), nmi(y, part.labels), ari(y, part.labels)))
    print("  final objective %.3g, recomputed %.3g, truth %.3g" % (
        trace.objectives()[-1], ncut(g, part.labels), ncut(g, y)))

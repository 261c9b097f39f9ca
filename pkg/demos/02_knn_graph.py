"""
From feature vectors to a weighted k-NN graph
"""

import numpy as np

from greedycut import clr_weights, default_k, knn, knn_graph
from greedycut.synthetic import blobs

## Three points on a line
x = np.array([[0.0], [1.0], [10.0]])
nb = knn(x, 2)
print("neighbor ids\n", nb.ids)
print("squared distances\n", nb.dists)

## Each row spreads unit weight over its k nearest, scaled by the (k+1)-th
g = clr_weights(nb, 1)
print(g.to_scipy().toarray())

## The usual neighborhood size for n samples and c clusters
print("k for n=2500, c=5:", default_k(2500, 5))

## A graph over Gaussian blobs
x, y = blobs(5, 500, separation=8.0, seed=0)
g = knn_graph(x, 10)
print("n =", g.n, "edges =", g.n_edges, "mean degree =", g.degrees.mean())

## Large inputs use a k-d tree to shortlist candidates; the lists are identical
a = knn(x, 10, method="brute")
b = knn(x, 10, method="kdtree")
print("same neighbors:", np.array_equal(a.ids, b.ids))

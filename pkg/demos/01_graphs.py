"""
Building, validating and serializing sparse graphs
"""

import io

import numpy as np

from greedycut import from_edges, laplacian_entry, load_edge_list, validate
from greedycut.graph import dump_edge_list

## A path 0 - 1 - 2 from edge-list text
g = load_edge_list("# a unit path\n0 1 1\n1 2 1\n")
print("n =", g.n, "edges =", g.n_edges, "degrees =", g.degrees)

## The Laplacian is read off the adjacency, never stored
L = np.array([[laplacian_entry(g, i, j) for j in range(g.n)] for i in range(g.n)])
print(L)
print("row sums:", L.sum(axis=1))

## Both directions are stored; the emitter writes each pair once
buf = io.StringIO()
dump_edge_list(g, buf)
print(buf.getvalue())

## Arrays built elsewhere go through from_edges, which rejects bad input
h = from_edges([0, 1, 2], [1, 2, 0], [0.5, 1.0, 2.0])
print(validate(h))

for bad in ("0 0 1", "0 1 1\n1 0 1", "0 2 1"):
    try:
        load_edge_list(bad)
    except ValueError as exc:
        print(type(exc).__name__, "-", exc)

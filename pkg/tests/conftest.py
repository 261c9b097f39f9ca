import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from greedycut.graph import from_edges, load_edge_list
from greedycut.neighbors import knn_graph

# fixed example streams keep the suite reproducible run to run
settings.register_profile("repro", derandomize=True, database=None)
settings.load_profile("repro")


@pytest.fixture
def edge():
    return load_edge_list("0 1 1.0")


@pytest.fixture
def path3():
    return load_edge_list("0 1 1\n1 2 1")


@pytest.fixture
def triangle():
    return load_edge_list("0 1 1\n1 2 1\n0 2 1")


@pytest.fixture
def two_edges():
    return load_edge_list("0 1 1\n2 3 1")


def random_knn_graph(rng, n, k, dim=3):
    x = rng.standard_normal((n, dim))
    return knn_graph(x, k)


@st.composite
def weighted_graphs(draw, min_n=2, max_n=30, connected=False):
    """Random simple graphs without isolated vertices.

    A spanning path (or a perfect-ish matching when not forced connected)
    guarantees every vertex has an edge; extra edges are drawn on top.
    """
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(n)))
    if connected or draw(st.booleans()):
        base = [(perm[t], perm[t + 1]) for t in range(n - 1)]
    else:
        base = [(perm[t], perm[t + 1]) for t in range(0, n - 1, 2)]
        if n % 2:
            base.append((perm[-1], perm[0]))
    extra = draw(
        st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n)
    )
    pairs = {(min(a, b), max(a, b)) for a, b in base + extra if a != b}
    pairs = sorted(pairs)
    weights = draw(
        st.lists(
            st.floats(0.01, 10.0, allow_nan=False, allow_infinity=False),
            min_size=len(pairs),
            max_size=len(pairs),
        )
    )
    u, v = np.array(pairs, dtype=np.int64).T
    return from_edges(u, v, weights, n=n)

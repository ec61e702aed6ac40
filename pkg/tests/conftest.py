import numpy as np
import pytest

from regioner.graph import WeightedGraph


def path_graph(weights) -> WeightedGraph:
    """Path 0-1-...-k with the given edge weights."""
    weights = np.asarray(weights, dtype=np.float64)
    n = weights.size + 1
    return WeightedGraph.from_edges(n, np.arange(n - 1), np.arange(1, n), weights)


def complete_graph(n: int, weight: float = 1.0) -> WeightedGraph:
    rows, cols = np.triu_indices(n, k=1)
    return WeightedGraph.from_edges(n, rows, cols, np.full(rows.size, weight))


def star_graph(n_leaves: int, weight: float = 1.0) -> WeightedGraph:
    """Node 0 is the hub; leaves are 1..n_leaves."""
    rows = np.zeros(n_leaves, dtype=np.int64)
    cols = np.arange(1, n_leaves + 1)
    return WeightedGraph.from_edges(n_leaves + 1, rows, cols, np.full(n_leaves, weight))


def random_connected_graph(rng, n: int, extra_edges: int | None = None) -> WeightedGraph:
    """Random spanning tree plus extra random edges; weights in (0, 1]."""
    rows, cols = [], []
    for v in range(1, n):
        rows.append(int(rng.integers(0, v)))
        cols.append(v)
    if extra_edges is None:
        extra_edges = n
    for _ in range(extra_edges):
        a, b = rng.choice(n, size=2, replace=False)
        lo, hi = (int(a), int(b)) if a < b else (int(b), int(a))
        if (lo, hi) not in zip(rows, cols):
            rows.append(lo)
            cols.append(hi)
    weights = 1.0 - rng.random(len(rows))  # (0, 1]
    return WeightedGraph.from_edges(n, rows, cols, weights)


def random_disjoint_sets(rng, n: int, sizes) -> list[np.ndarray]:
    perm = rng.permutation(n)
    out, start = [], 0
    for size in sizes:
        out.append(np.sort(perm[start : start + size]))
        start += size
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

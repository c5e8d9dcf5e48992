"""Shared graph builders for the test suite."""

import numpy as np

from biaswalk.graph import Graph, build_graph


def triangle() -> Graph:
    return build_graph([[0, 1], [1, 2], [0, 2]])


def star(leaves: int = 3) -> Graph:
    return build_graph([[0, i] for i in range(1, leaves + 1)])


def path_graph(n: int = 3, directed: bool = False) -> Graph:
    return build_graph([[i, i + 1] for i in range(n - 1)], directed=directed)


def diamond() -> Graph:
    # degrees: a=1, b=3, c=2, d=2
    return build_graph([[0, 1], [1, 2], [1, 3], [2, 3]])


def random_connected(rng: np.random.Generator, n_max: int = 500,
                     extra_edges: float = 1.0) -> Graph:
    """Random connected undirected graph: attachment tree plus extras."""
    n = int(rng.integers(3, n_max + 1))
    edges = [[int(rng.integers(0, i)), i] for i in range(1, n)]
    m_extra = int(rng.integers(0, max(int(extra_edges * n), 1)))
    for _ in range(m_extra):
        u = int(rng.integers(0, n))
        v = int(rng.integers(0, n))
        if u != v:
            edges.append([u, v])
    return build_graph(edges, node_count=n)

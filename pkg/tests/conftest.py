"""Shared fixtures: small hand-checkable graphs and random-graph helpers."""

import numpy as np
import pytest

from surrograph.graphcore import LabelSchema, PropertyGraph
from surrograph import datasets


@pytest.fixture
def path3():
    """a - b - c."""
    return PropertyGraph(3, [(0, 1), (1, 2)])


@pytest.fixture
def triangle_aab():
    """Triangle with labels A, A, B."""
    schema = LabelSchema(["label_x"], [("A", "B")])
    return PropertyGraph(3, [(0, 1), (1, 2), (0, 2)], schema, [[0], [0], [1]])


@pytest.fixture
def two_triangles_bridge():
    """{0,1,2} and {3,4,5} triangles joined by the bridge 2-3."""
    return PropertyGraph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


@pytest.fixture
def k4():
    return PropertyGraph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


@pytest.fixture
def star_xy():
    """Center (X) with four leaves (Y)."""
    schema = LabelSchema(["label_s"], [("X", "Y")])
    return PropertyGraph(
        5, [(0, 1), (0, 2), (0, 3), (0, 4)], schema, [[0], [1], [1], [1], [1]]
    )


@pytest.fixture(scope="session")
def karate():
    return datasets.karate_graph()


def random_labeled_graph(rng: np.random.Generator, max_vertices=50, max_edges=200,
                         max_labels=3, min_edges=1):
    """Random simple labeled graph for property tests."""
    n = int(rng.integers(2, max_vertices + 1))
    cap = n * (n - 1) // 2
    m = int(rng.integers(min_edges, min(max_edges, cap) + 1))
    seen = set()
    while len(seen) < m:
        u = int(rng.integers(0, n))
        v = int(rng.integers(0, n))
        if u != v:
            seen.add((min(u, v), max(u, v)))
    n_labels = int(rng.integers(1, max_labels + 1))
    names = [f"label_l{k}" for k in range(n_labels)]
    domains = []
    codes = np.empty((n, n_labels), dtype=np.int64)
    for k in range(n_labels):
        size = int(rng.integers(2, 5))
        domains.append(tuple(f"v{j}" for j in range(size)))
        codes[:, k] = rng.integers(0, size, size=n)
    schema = LabelSchema(names, domains)
    return PropertyGraph(n, sorted(seen), schema, codes)


def tiny_random_graph(rng: np.random.Generator, max_vertices=8):
    """Small connected-ish random graph for exhaustive-oracle tests."""
    n = int(rng.integers(3, max_vertices + 1))
    cap = n * (n - 1) // 2
    m = int(rng.integers(n - 1, cap + 1))
    seen = set()
    while len(seen) < m:
        u = int(rng.integers(0, n))
        v = int(rng.integers(0, n))
        if u != v:
            seen.add((min(u, v), max(u, v)))
    return PropertyGraph(n, sorted(seen))

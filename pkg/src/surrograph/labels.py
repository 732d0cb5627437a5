"""Joint label categories and the empirical vertex/edge distributions.

A joint category is one combination of values across all labels; with
domain sizes ``n_1..n_M`` there are ``N = prod(n_k)`` categories, indexed
lexicographically by schema order then domain order (the last label varies
fastest). The index is a mixed-radix bijection, so the full product is
never materialised.

The vertex distribution is dense over category indices; the edge
distribution is sparse over *unordered* category pairs because the graphs
are undirected and ``N**2`` grows multiplicatively under augmentation.
An edge whose endpoints share a category contributes once, under the key
``(j, j)``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import InputError
from .graphcore import LabelSchema, PropertyGraph

__all__ = [
    "JointCategoryIndex",
    "VertexCategoryDistribution",
    "EdgeCategoryDistribution",
    "enumerate_joint_categories",
    "estimate_vertex_category_distribution",
    "estimate_edge_category_distribution",
    "write_vertex_distribution_csv",
    "write_edge_distribution_csv",
]


class JointCategoryIndex:
    """Bijection between label vectors and category indices ``0..N-1``."""

    def __init__(self, schema: LabelSchema):
        self.schema = schema
        sizes = schema.domain_sizes()
        for name, n_k in zip(schema.names, sizes):
            if n_k == 0:
                raise InputError(f"label {name!r} has an empty domain")
        self.n_categories = int(math.prod(sizes)) if sizes else 1
        # strides[k] = product of domain sizes after label k
        strides = []
        acc = 1
        for n_k in reversed(sizes):
            strides.append(acc)
            acc *= n_k
        self.strides = np.array(list(reversed(strides)), dtype=np.int64)

    def category_of_codes(self, codes: np.ndarray) -> np.ndarray:
        """Vectorised code matrix ``(V, M)`` -> category indices ``(V,)``."""
        codes = np.asarray(codes, dtype=np.int64)
        if self.schema.n_labels == 0:
            return np.zeros(len(codes), dtype=np.int64)
        return codes @ self.strides

    def category_of_vector(self, values) -> int:
        codes = np.asarray(self.schema.codes_of_vector(values), dtype=np.int64)
        return int(codes @ self.strides) if self.schema.n_labels else 0

    def codes_of_category(self, j: int) -> tuple[int, ...]:
        if not 0 <= j < self.n_categories:
            raise InputError(f"category index {j} out of range")
        out = []
        for k, n_k in enumerate(self.schema.domain_sizes()):
            out.append((j // int(self.strides[k])) % n_k)
        return tuple(out)

    def labels_of_category(self, j: int) -> tuple[str, ...]:
        return tuple(
            self.schema.domains[k][c] for k, c in enumerate(self.codes_of_category(j))
        )

    def categories(self) -> Iterator[tuple[str, ...]]:
        """All N label vectors in index order (lazy; N can be large)."""
        for j in range(self.n_categories):
            yield self.labels_of_category(j)

    def __eq__(self, other) -> bool:
        return isinstance(other, JointCategoryIndex) and self.schema == other.schema

    def __hash__(self):
        return hash(self.schema)

    def __repr__(self):
        return f"JointCategoryIndex(N={self.n_categories}, schema={self.schema!r})"


def enumerate_joint_categories(schema: LabelSchema) -> JointCategoryIndex:
    """Build the deterministic category index over all label combinations."""
    return JointCategoryIndex(schema)


@dataclass
class VertexCategoryDistribution:
    """Empirical probability of each joint category among vertices.

    ``counts`` is retained when the distribution was estimated from a
    graph; the allocator then uses exact integer arithmetic instead of
    float division.
    """

    index: JointCategoryIndex
    probs: np.ndarray
    counts: np.ndarray | None = None
    n_vertices: int = 0

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=np.float64)
        if len(self.probs) != self.index.n_categories:
            raise InputError("probability vector length does not match category count")
        if np.any(self.probs < 0):
            raise InputError("negative category probability")
        if abs(float(self.probs.sum()) - 1.0) > 1e-12:
            raise InputError("vertex category probabilities must sum to 1")

    def probability_of(self, j: int) -> float:
        return float(self.probs[j])


@dataclass
class EdgeCategoryDistribution:
    """Empirical probability of each unordered category pair among edges.

    Sparse: only observed pairs are stored, keyed ``(j, j')`` with
    ``j <= j'``.
    """

    index: JointCategoryIndex
    pair_probs: dict[tuple[int, int], float]
    pair_counts: dict[tuple[int, int], int] | None = None
    n_edges: int = 0

    def __post_init__(self):
        for (a, b), prob in self.pair_probs.items():
            if a > b:
                raise InputError("edge category pairs must be stored with j <= j'")
            if prob < 0:
                raise InputError("negative pair probability")
            if not (0 <= a < self.index.n_categories and 0 <= b < self.index.n_categories):
                raise InputError("pair category index out of range")
        total = math.fsum(self.pair_probs.values())
        if abs(total - 1.0) > 1e-12:
            raise InputError("edge pair probabilities must sum to 1")

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pair_probs)

    def probability_of(self, j: int, jp: int) -> float:
        key = (j, jp) if j <= jp else (jp, j)
        return self.pair_probs.get(key, 0.0)


def estimate_vertex_category_distribution(
    g: PropertyGraph, idx: JointCategoryIndex
) -> VertexCategoryDistribution:
    """Count vertices per joint category and normalise by |V|."""
    if g.n_vertices == 0:
        raise InputError("cannot estimate P_L on an empty graph")
    if g.schema != idx.schema:
        raise InputError("graph labels do not conform to the category index")
    cats = idx.category_of_codes(g.label_codes)
    counts = np.bincount(cats, minlength=idx.n_categories).astype(np.int64)
    return VertexCategoryDistribution(
        index=idx,
        probs=counts / g.n_vertices,
        counts=counts,
        n_vertices=g.n_vertices,
    )


def estimate_edge_category_distribution(
    g: PropertyGraph, idx: JointCategoryIndex
) -> EdgeCategoryDistribution:
    """Count edges per unordered endpoint-category pair and normalise by |E|."""
    if g.n_edges == 0:
        raise InputError("cannot estimate P_C on a graph with no edges")
    if g.schema != idx.schema:
        raise InputError("graph labels do not conform to the category index")
    cats = idx.category_of_codes(g.label_codes)
    ca = cats[g.edges[:, 0]]
    cb = cats[g.edges[:, 1]]
    lo = np.minimum(ca, cb)
    hi = np.maximum(ca, cb)
    keys = lo * idx.n_categories + hi
    uniq, cnt = np.unique(keys, return_counts=True)
    pair_counts = {
        (int(k // idx.n_categories), int(k % idx.n_categories)): int(c)
        for k, c in zip(uniq, cnt)
    }
    m = g.n_edges
    pair_probs = {key: c / m for key, c in pair_counts.items()}
    return EdgeCategoryDistribution(
        index=idx, pair_probs=pair_probs, pair_counts=pair_counts, n_edges=m
    )


def write_vertex_distribution_csv(dist: VertexCategoryDistribution, path) -> None:
    """Audit dump: one row per category with nonzero probability."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(dist.index.schema.names) + ["probability"])
        for j in np.flatnonzero(dist.probs):
            writer.writerow(
                list(dist.index.labels_of_category(int(j))) + [repr(float(dist.probs[j]))]
            )


def write_edge_distribution_csv(dist: EdgeCategoryDistribution, path) -> None:
    """Audit dump: one row per observed unordered category pair."""
    names = dist.index.schema.names
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            [f"{n}_1" for n in names] + [f"{n}_2" for n in names] + ["probability"]
        )
        for a, b in dist.sorted_pairs():
            writer.writerow(
                list(dist.index.labels_of_category(a))
                + list(dist.index.labels_of_category(b))
                + [repr(float(dist.pair_probs[(a, b)]))]
            )

"""Undirected simple property graph with categorical vertex labels.

Vertices are dense integers ``0..n-1``. External string identifiers from
source files ride along in ``node_ids`` and never participate in any
computation, so surrogate graphs (which have ``node_ids=None``) cannot leak
them. Labels are stored as integer level codes against an ordered
:class:`LabelSchema`; the string vectors are reconstructed on demand.

Graphs are immutable after construction: the label-append operations in
:mod:`surrograph.augment` return new instances, and derived structures
(degrees, adjacency) are cached lazily, which is safe for concurrent
readers.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError

__all__ = [
    "LabelSchema",
    "PropertyGraph",
    "degree_sequence",
    "ego_union_subgraph",
    "closeness_centrality",
]


class LabelSchema:
    """Ordered list of label names with their categorical value domains."""

    def __init__(self, names: Sequence[str], domains: Sequence[Sequence[str]]):
        if len(names) != len(domains):
            raise InputError("label schema: names and domains differ in length")
        if len(set(names)) != len(names):
            raise InputError("label schema: duplicate label names")
        for name, domain in zip(names, domains):
            if len(domain) == 0:
                raise InputError(f"label schema: empty domain for label {name!r}")
            if len(set(domain)) != len(domain):
                raise InputError(f"label schema: duplicate values in domain of {name!r}")
        self.names: tuple[str, ...] = tuple(names)
        self.domains: tuple[tuple[str, ...], ...] = tuple(tuple(d) for d in domains)
        self._value_index: tuple[dict[str, int], ...] = tuple(
            {v: i for i, v in enumerate(d)} for d in self.domains
        )

    @property
    def n_labels(self) -> int:
        return len(self.names)

    def domain_sizes(self) -> tuple[int, ...]:
        return tuple(len(d) for d in self.domains)

    def code_of(self, k: int, value: str) -> int:
        try:
            return self._value_index[k][value]
        except KeyError:
            raise InputError(
                f"value {value!r} not in domain of label {self.names[k]!r}"
            ) from None

    def codes_of_vector(self, values: Sequence[str]) -> tuple[int, ...]:
        if len(values) != self.n_labels:
            raise InputError("label vector length does not match schema")
        return tuple(self.code_of(k, v) for k, v in enumerate(values))

    def extended(self, name: str, domain: Sequence[str]) -> "LabelSchema":
        """New schema with one label appended."""
        if name in self.names:
            raise InputError(f"label {name!r} already present in schema")
        return LabelSchema(self.names + (name,), self.domains + (tuple(domain),))

    def position_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"unknown label {name!r}") from None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LabelSchema)
            and self.names == other.names
            and self.domains == other.domains
        )

    def __hash__(self):
        return hash((self.names, self.domains))

    def __repr__(self):
        parts = ", ".join(f"{n}:{len(d)}" for n, d in zip(self.names, self.domains))
        return f"LabelSchema({parts})"


def _canonical_edges(edges, n_vertices: int) -> np.ndarray:
    """Validate and canonicalise an edge table: (min,max) pairs, lexsorted."""
    arr = np.asarray(edges, dtype=np.int64)
    if arr.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InputError("edges must be an (E, 2) array of vertex ids")
    if arr.min() < 0 or arr.max() >= n_vertices:
        raise InputError("edge endpoint outside the vertex id range")
    if np.any(arr[:, 0] == arr[:, 1]):
        raise InputError("self-loops are not allowed in a simple graph")
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    order = np.lexsort((hi, lo))
    canon = np.column_stack((lo[order], hi[order]))
    if len(canon) > 1:
        dup = np.all(canon[1:] == canon[:-1], axis=1)
        if np.any(dup):
            raise InputError("duplicate edges are not allowed in a simple graph")
    return canon


class PropertyGraph:
    """Immutable undirected simple graph with per-vertex label vectors.

    Parameters
    ----------
    n_vertices:
        Number of vertices; ids are dense ``0..n_vertices-1``.
    edges:
        ``(E, 2)`` array-like of vertex-id pairs. Canonicalised to
        ``(min, max)`` and sorted; self-loops or duplicates raise
        :class:`InputError` (ingest cleans files *before* construction).
    schema:
        The label schema; may have zero labels.
    label_codes:
        ``(n_vertices, M)`` integer level codes, or ``None`` for ``M == 0``.
    node_ids:
        Optional external string ids, index-aligned with vertices.
    passive:
        Optional non-label metadata columns from the source file, by name.
    column_order:
        Original nodes-file column order (labels and passive interleaved),
        preserved verbatim on write.
    """

    def __init__(
        self,
        n_vertices: int,
        edges,
        schema: LabelSchema | None = None,
        label_codes=None,
        node_ids: Sequence[str] | None = None,
        passive: Mapping[str, Sequence[str]] | None = None,
        column_order: Sequence[str] | None = None,
    ):
        if n_vertices < 0:
            raise InputError("vertex count must be non-negative")
        self.n_vertices = int(n_vertices)
        self.schema = schema if schema is not None else LabelSchema((), ())
        self.edges = _canonical_edges(edges, self.n_vertices)
        self.edges.setflags(write=False)

        m = self.schema.n_labels
        if label_codes is None:
            codes = np.zeros((self.n_vertices, m), dtype=np.int64)
        else:
            codes = np.asarray(label_codes, dtype=np.int64)
            codes = codes.reshape(self.n_vertices, m)
        if m:
            sizes = np.asarray(self.schema.domain_sizes(), dtype=np.int64)
            if codes.size and (codes.min() < 0 or np.any(codes >= sizes)):
                raise InputError("label code outside its declared domain")
        self.label_codes = codes
        self.label_codes.setflags(write=False)

        if node_ids is not None:
            node_ids = tuple(node_ids)
            if len(node_ids) != self.n_vertices:
                raise InputError("node_ids length does not match vertex count")
        self.node_ids = node_ids
        self.passive = {k: tuple(v) for k, v in passive.items()} if passive else None
        if self.passive:
            for name, col in self.passive.items():
                if len(col) != self.n_vertices:
                    raise InputError(f"passive column {name!r} has wrong length")
        self.column_order = tuple(column_order) if column_order is not None else None

        self._degrees: np.ndarray | None = None
        self._adjacency: tuple[np.ndarray, np.ndarray] | None = None
        self._edge_keys: frozenset[int] | None = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_label_rows(
        cls,
        schema: LabelSchema,
        label_rows: Sequence[Sequence[str]],
        edges,
        **kwargs,
    ) -> "PropertyGraph":
        """Build from string label vectors instead of integer codes."""
        codes = np.array(
            [schema.codes_of_vector(row) for row in label_rows], dtype=np.int64
        ).reshape(len(label_rows), schema.n_labels)
        return cls(len(label_rows), edges, schema, codes, **kwargs)

    # -- basic queries ---------------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def label_vector(self, v: int) -> tuple[str, ...]:
        return tuple(
            self.schema.domains[k][c] for k, c in enumerate(self.label_codes[v])
        )

    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            deg = np.bincount(self.edges.ravel(), minlength=self.n_vertices)
            deg = deg.astype(np.int64)
            deg.setflags(write=False)
            self._degrees = deg
        return self._degrees

    def adjacency(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR adjacency ``(indptr, neighbors)``; neighbor lists are sorted."""
        if self._adjacency is None:
            deg = self.degrees()
            indptr = np.zeros(self.n_vertices + 1, dtype=np.int64)
            np.cumsum(deg, out=indptr[1:])
            neighbors = np.empty(2 * self.n_edges, dtype=np.int64)
            cursor = indptr[:-1].copy()
            for u, v in self.edges:
                neighbors[cursor[u]] = v
                cursor[u] += 1
                neighbors[cursor[v]] = u
                cursor[v] += 1
            for v in range(self.n_vertices):
                neighbors[indptr[v] : indptr[v + 1]].sort()
            indptr.setflags(write=False)
            neighbors.setflags(write=False)
            self._adjacency = (indptr, neighbors)
        return self._adjacency

    def edge_keys(self) -> frozenset[int]:
        """Set of ``u * n + v`` keys (``u < v``) for O(1) edge lookup."""
        if self._edge_keys is None:
            n = self.n_vertices
            self._edge_keys = frozenset(
                (int(u) * n + int(v)) for u, v in self.edges
            )
        return self._edge_keys

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        a, b = (u, v) if u < v else (v, u)
        return (a * self.n_vertices + b) in self.edge_keys()

    def neighbors(self, v: int) -> np.ndarray:
        indptr, nbrs = self.adjacency()
        return nbrs[indptr[v] : indptr[v + 1]]

    def __repr__(self):
        return (
            f"PropertyGraph(|V|={self.n_vertices}, |E|={self.n_edges}, "
            f"labels={list(self.schema.names)})"
        )


def degree_sequence(g: PropertyGraph) -> np.ndarray:
    """Per-vertex degree, index-aligned with vertices; sums to 2|E|."""
    return g.degrees()


def ego_union_subgraph(
    g: PropertyGraph, seeds: Iterable[int], radius: int
) -> tuple[PropertyGraph, np.ndarray]:
    """Induced subgraph on all vertices within ``radius`` hops of any seed.

    Seeds themselves are included (they are the radius-0 members). Returns
    the re-densified subgraph and the id mapping ``kept`` where ``kept[new]``
    is the original vertex id, so callers can report the correspondence.
    """
    if radius < 0:
        raise InputError("radius must be non-negative")
    seed_list = [int(s) for s in seeds]
    for s in seed_list:
        if s < 0 or s >= g.n_vertices:
            raise InputError(f"unknown seed vertex id {s}")

    indptr, nbrs = g.adjacency()
    dist = np.full(g.n_vertices, -1, dtype=np.int64)
    frontier = []
    for s in seed_list:
        if dist[s] < 0:
            dist[s] = 0
            frontier.append(s)
    depth = 0
    while frontier and depth < radius:
        depth += 1
        nxt = []
        for u in frontier:
            for w in nbrs[indptr[u] : indptr[u + 1]]:
                if dist[w] < 0:
                    dist[w] = depth
                    nxt.append(int(w))
        frontier = nxt

    kept = np.flatnonzero(dist >= 0)
    new_id = np.full(g.n_vertices, -1, dtype=np.int64)
    new_id[kept] = np.arange(len(kept))
    if g.n_edges:
        mask = (new_id[g.edges[:, 0]] >= 0) & (new_id[g.edges[:, 1]] >= 0)
        sub_edges = new_id[g.edges[mask]]
    else:
        sub_edges = np.empty((0, 2), dtype=np.int64)

    sub = PropertyGraph(
        len(kept),
        sub_edges,
        g.schema,
        g.label_codes[kept] if g.schema.n_labels else None,
        node_ids=tuple(g.node_ids[i] for i in kept) if g.node_ids else None,
        passive=(
            {k: tuple(col[i] for i in kept) for k, col in g.passive.items()}
            if g.passive
            else None
        ),
        column_order=g.column_order,
    )
    return sub, kept


def closeness_centrality(g: PropertyGraph) -> np.ndarray:
    """Per-vertex closeness ``(reachable-1) / sum of distances``.

    Computed within each connected component; isolated vertices score 0.
    Used when synthesising structure-correlated attribute labels.
    """
    indptr, nbrs = g.adjacency()
    n = g.n_vertices
    scores = np.zeros(n, dtype=np.float64)
    dist = np.empty(n, dtype=np.int64)
    for s in range(n):
        dist.fill(-1)
        dist[s] = 0
        queue = [s]
        head = 0
        total = 0
        reached = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            du = dist[u]
            total += du
            reached += 1
            for w in nbrs[indptr[u] : indptr[u + 1]]:
                if dist[w] < 0:
                    dist[w] = du + 1
                    queue.append(int(w))
        if reached > 1:
            scores[s] = (reached - 1) / total
    return scores

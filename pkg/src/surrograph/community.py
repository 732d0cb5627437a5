"""Community detection, modularity scoring, and linchpin centrality.

Two detectors are provided, matching the per-case-study algorithm choice:
exact Girvan-Newman edge-betweenness removal for small graphs (the
dendrogram cut maximising modularity is returned) and the fast-greedy
agglomerative merger for larger ones. Both are fully deterministic, with
documented tie-breaking, so repeated runs on the same graph always return
the same partition.
"""

from __future__ import annotations

import csv
import heapq
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InputError
from .graphcore import PropertyGraph

__all__ = [
    "CommunityAssignment",
    "edge_betweenness_communities",
    "greedy_modularity_communities",
    "modularity",
    "linchpin_centrality",
    "write_communities_csv",
]


@dataclass
class CommunityAssignment:
    """Partition of the vertex set into contiguous community ids 0..K-1."""

    membership: np.ndarray
    n_communities: int
    sizes: np.ndarray  # descending

    @classmethod
    def from_membership(cls, raw) -> "CommunityAssignment":
        """Relabel arbitrary community tags to 0..K-1 by first appearance."""
        raw = np.asarray(raw, dtype=np.int64)
        mapping: dict[int, int] = {}
        membership = np.empty(len(raw), dtype=np.int64)
        for i, tag in enumerate(raw):
            tag = int(tag)
            if tag not in mapping:
                mapping[tag] = len(mapping)
            membership[i] = mapping[tag]
        k = len(mapping)
        sizes = np.sort(np.bincount(membership, minlength=k))[::-1]
        return cls(membership=membership, n_communities=k, sizes=sizes.astype(np.int64))

    def size_vector(self) -> np.ndarray:
        return self.sizes


def _graph_csr(edges: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """CSR with per-position edge ids, neighbor lists in edge order."""
    deg = np.bincount(edges.ravel(), minlength=n) if len(edges) else np.zeros(n, int)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    adj = np.empty(2 * len(edges), dtype=np.int64)
    eid = np.empty(2 * len(edges), dtype=np.int64)
    cursor = indptr[:-1].copy()
    for i, (u, v) in enumerate(edges):
        adj[cursor[u]] = v
        eid[cursor[u]] = i
        cursor[u] += 1
        adj[cursor[v]] = u
        eid[cursor[v]] = i
        cursor[v] += 1
    return indptr, adj, eid


def _components(n: int, edges: np.ndarray) -> np.ndarray:
    """Connected-component tag per vertex (union-find, path halving)."""
    parent = np.arange(n, dtype=np.int64)

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(int(u)), find(int(v))
        if ru != rv:
            if ru < rv:
                parent[rv] = ru
            else:
                parent[ru] = rv
    return np.array([find(i) for i in range(n)], dtype=np.int64)


def modularity(g: PropertyGraph, assignment) -> float:
    """Newman modularity Q of a partition.

    ``Q = sum_c [e_c/m - (d_c/2m)^2]`` with ``e_c`` intra-community edges,
    ``d_c`` the community's total degree, and ``m`` the edge count.
    """
    membership = (
        assignment.membership
        if isinstance(assignment, CommunityAssignment)
        else np.asarray(assignment, dtype=np.int64)
    )
    if len(membership) != g.n_vertices:
        raise InputError("assignment does not cover every vertex")
    if len(membership) and membership.min() < 0:
        raise InputError("community ids must be non-negative")
    m = g.n_edges
    if m == 0:
        raise InputError("modularity is undefined on a graph with no edges")
    k = int(membership.max()) + 1 if len(membership) else 0
    intra = np.zeros(k, dtype=np.int64)
    same = membership[g.edges[:, 0]] == membership[g.edges[:, 1]]
    np.add.at(intra, membership[g.edges[:, 0]][same], 1)
    comm_deg = np.zeros(k, dtype=np.int64)
    np.add.at(comm_deg, membership, g.degrees())
    return float(np.sum(intra / m - (comm_deg / (2 * m)) ** 2))


def edge_betweenness_communities(
    g: PropertyGraph, backend: str | None = None
) -> CommunityAssignment:
    """Girvan-Newman: remove max-betweenness edges, keep the best partition.

    Betweenness is recomputed exactly after every removal (ties broken by
    the lowest edge id in the graph's canonical edge order). Each partition
    in the removal sequence is scored with modularity on the *original*
    graph; the earliest maximiser wins.
    """
    if g.n_vertices == 0:
        raise InputError("cannot detect communities on an empty graph")
    if g.n_edges == 0:
        return CommunityAssignment.from_membership(np.arange(g.n_vertices))

    kern = _kernels.get_kernels(backend)
    n = g.n_vertices
    edges = g.edges
    edge_ids = np.arange(len(edges))
    alive = np.ones(len(edges), dtype=bool)

    best_membership = _components(n, edges)
    best_q = modularity(g, CommunityAssignment.from_membership(best_membership).membership)

    while alive.any():
        live_ids = edge_ids[alive]
        live_edges = edges[alive]
        indptr, adj, eid = _graph_csr(live_edges, n)
        bc = kern.edge_betweenness_kernel(indptr, adj, eid, len(live_edges))
        # live edges are in ascending original-id order, so argmax's
        # first-maximum rule implements the lowest-edge-id tie-break
        alive[live_ids[int(np.argmax(bc))]] = False

        membership = _components(n, edges[alive])
        q = modularity(g, CommunityAssignment.from_membership(membership).membership)
        if q > best_q:
            best_q = q
            best_membership = membership

    return CommunityAssignment.from_membership(best_membership)


def greedy_modularity_communities(g: PropertyGraph) -> CommunityAssignment:
    """Fast-greedy agglomeration: merge the pair with the largest
    modularity gain until no merge improves Q.

    Gains tie-break on (smaller first community id, then second id); a
    merged community keeps the smaller id. Vertices in zero-degree
    communities remain singletons.
    """
    if g.n_vertices == 0:
        raise InputError("cannot detect communities on an empty graph")
    m = g.n_edges
    if m == 0:
        raise InputError("greedy modularity requires at least one edge")

    deg = g.degrees().astype(np.float64)
    two_m = 2.0 * m
    comm_deg = {v: float(deg[v]) for v in range(g.n_vertices)}
    # edge weights between communities (symmetric dict-of-dict, ints)
    weights: dict[int, dict[int, int]] = {v: {} for v in range(g.n_vertices)}
    for u, v in g.edges:
        u, v = int(u), int(v)
        weights[u][v] = weights[u].get(v, 0) + 1
        weights[v][u] = weights[v].get(u, 0) + 1

    stamps = {v: 0 for v in range(g.n_vertices)}
    parent = {v: v for v in range(g.n_vertices)}

    def gain(a: int, b: int) -> float:
        return weights[a][b] / m - comm_deg[a] * comm_deg[b] / (two_m * two_m)

    heap: list[tuple[float, int, int, int, int]] = []
    for a in weights:
        for b in weights[a]:
            if a < b:
                heap.append((-gain(a, b), a, b, 0, 0))
    heapq.heapify(heap)

    while heap:
        neg_g, a, b, sa, sb = heapq.heappop(heap)
        if (
            a not in weights
            or b not in weights
            or stamps[a] != sa
            or stamps[b] != sb
            or b not in weights[a]
        ):
            continue
        if -neg_g <= 0.0:
            break
        # merge b into a (a < b by construction)
        for c, w in weights[b].items():
            if c == a:
                continue
            weights[a][c] = weights[a].get(c, 0) + w
            weights[c][a] = weights[c].get(a, 0) + w
            del weights[c][b]
        del weights[a][b]
        comm_deg[a] += comm_deg[b]
        del weights[b], comm_deg[b], stamps[b]
        parent[b] = a
        stamps[a] += 1
        for c in weights[a]:
            lo, hi = (a, c) if a < c else (c, a)
            heapq.heappush(heap, (-gain(lo, hi), lo, hi, stamps[lo], stamps[hi]))

    def root(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    return CommunityAssignment.from_membership(
        [root(v) for v in range(g.n_vertices)]
    )


def linchpin_centrality(g: PropertyGraph, attribute: str) -> np.ndarray:
    """Fraction of a vertex's neighbors for whom it is their only contact
    with its attribute value.

    ``score(v) = |{u in N(v) : no w in N(u), w != v, with attr(w) = attr(v)}|
    / deg(v)``; isolated vertices score 0. Values are always in [0, 1].
    """
    pos = g.schema.position_of(attribute)
    attr = g.label_codes[:, pos]
    indptr, nbrs = g.adjacency()

    # per-vertex count of neighbors holding each attribute value
    nbr_attr_count: list[dict[int, int]] = [dict() for _ in range(g.n_vertices)]
    for u, v in g.edges:
        u, v = int(u), int(v)
        au, av = int(attr[u]), int(attr[v])
        nbr_attr_count[u][av] = nbr_attr_count[u].get(av, 0) + 1
        nbr_attr_count[v][au] = nbr_attr_count[v].get(au, 0) + 1

    scores = np.zeros(g.n_vertices, dtype=np.float64)
    for v in range(g.n_vertices):
        d = indptr[v + 1] - indptr[v]
        if d == 0:
            continue
        a_v = int(attr[v])
        # v itself contributes 1 to each neighbor's count of a_v
        unique = sum(
            1 for u in nbrs[indptr[v] : indptr[v + 1]] if nbr_attr_count[int(u)][a_v] == 1
        )
        scores[v] = unique / d
    return scores


def write_communities_csv(g: PropertyGraph, assignment: CommunityAssignment, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["node_id", "community"])
        for v in range(g.n_vertices):
            node = g.node_ids[v] if g.node_ids else f"n{v}"
            writer.writerow([node, int(assignment.membership[v])])

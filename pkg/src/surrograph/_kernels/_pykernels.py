"""Pure-Python kernels, the fallback when the compiled extension is absent.

Both backends implement the same word-consumption and floating-point
contracts, so a graph generated (or a betweenness score computed) with one
backend is bit-identical to the other:

* ``sample_edges_kernel`` consumes exactly two 64-bit words per edge
  attempt (endpoint A first), maps a word to a list index via
  ``(word * n) >> 64``, and consumes nothing for pairs with an empty
  endpoint list.
* ``edge_betweenness_kernel`` accumulates in BFS-queue order over sources
  ``0..n-1`` with CSR neighbor order, which fixes every float operation's
  order.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def sample_edges_kernel(
    members,
    offsets,
    pair_a,
    pair_b,
    pair_counts,
    n_vertices,
    retry_budget,
    refill,
):
    """Place edges for each category pair by rejection sampling.

    Parameters mirror the compiled kernel: ``members``/``offsets`` give the
    per-category vertex lists, ``pair_a``/``pair_b``/``pair_counts`` the edge
    slots allocated to each unordered category pair, and ``refill`` is a
    zero-argument callable producing the next chunk of raw uint64 words.

    Returns ``(edges, placed_by_pair, retries_total)`` where ``edges`` is an
    ``(placed, 2)`` int64 array of canonical ``(min, max)`` endpoint pairs.
    """
    members = [int(x) for x in members]
    offsets = [int(x) for x in offsets]
    n = int(n_vertices)
    budget = int(retry_budget)

    total_slots = int(sum(int(c) for c in pair_counts))
    edges_u = np.empty(total_slots, dtype=np.int64)
    edges_v = np.empty(total_slots, dtype=np.int64)
    placed_by_pair = np.zeros(len(pair_a), dtype=np.int64)

    seen: set[int] = set()
    buf: list[int] = []
    pos = 0
    placed = 0
    retries = 0

    for p in range(len(pair_a)):
        a = int(pair_a[p])
        b = int(pair_b[p])
        count = int(pair_counts[p])
        off_a, len_a = offsets[a], offsets[a + 1] - offsets[a]
        off_b, len_b = offsets[b], offsets[b + 1] - offsets[b]
        if len_a == 0 or len_b == 0:
            continue
        for _ in range(count):
            for _attempt in range(budget):
                if pos == len(buf):
                    buf = [int(w) for w in refill()]
                    pos = 0
                w1 = buf[pos]
                pos += 1
                if pos == len(buf):
                    buf = [int(w) for w in refill()]
                    pos = 0
                w2 = buf[pos]
                pos += 1
                u = members[off_a + ((w1 * len_a) >> 64)]
                v = members[off_b + ((w2 * len_b) >> 64)]
                if u == v:
                    retries += 1
                    continue
                lo, hi = (u, v) if u < v else (v, u)
                key = lo * n + hi
                if key in seen:
                    retries += 1
                    continue
                seen.add(key)
                edges_u[placed] = lo
                edges_v[placed] = hi
                placed += 1
                placed_by_pair[p] += 1
                break

    edges = np.column_stack((edges_u[:placed], edges_v[:placed]))
    return edges, placed_by_pair, retries


def edge_betweenness_kernel(indptr, adj, eid, n_edges):
    """Exact edge betweenness (Brandes accumulation) on a CSR graph.

    ``adj[indptr[v]:indptr[v+1]]`` are the neighbors of ``v`` and ``eid``
    maps each CSR position to its undirected edge id. Returns per-edge
    betweenness with each unordered source pair counted once.
    """
    indptr = [int(x) for x in indptr]
    adj = [int(x) for x in adj]
    eid = [int(x) for x in eid]
    n = len(indptr) - 1

    bc = [0.0] * int(n_edges)
    for s in range(n):
        sigma = [0.0] * n
        dist = [-1] * n
        delta = [0.0] * n
        sigma[s] = 1.0
        dist[s] = 0
        order = [s]
        head = 0
        while head < len(order):
            u = order[head]
            head += 1
            du1 = dist[u] + 1
            su = sigma[u]
            for p in range(indptr[u], indptr[u + 1]):
                w = adj[p]
                if dist[w] < 0:
                    dist[w] = du1
                    order.append(w)
                if dist[w] == du1:
                    sigma[w] += su
        for i in range(len(order) - 1, -1, -1):
            w = order[i]
            coeff = (1.0 + delta[w]) / sigma[w]
            dw1 = dist[w] - 1
            for p in range(indptr[w], indptr[w + 1]):
                v = adj[p]
                if dist[v] == dw1:
                    c = sigma[v] * coeff
                    bc[eid[p]] += c
                    delta[v] += c

    out = np.array(bc, dtype=np.float64)
    out /= 2.0
    return out

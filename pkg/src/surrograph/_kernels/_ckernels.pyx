# distutils: language = c++
"""Compiled kernels for the two hot loops: edge rejection sampling and
Brandes edge betweenness. Must stay bit-identical to ``_pykernels`` — the
word-consumption order, the multiply-shift index mapping, and every float
operation order are part of the shared contract."""

import numpy as np

from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector

ctypedef unsigned long long u64
ctypedef long long i64

cdef extern from *:
    """
    static inline unsigned long long sg_index_from_word(unsigned long long w,
                                                        unsigned long long n) {
        return (unsigned long long)(((__uint128_t)w * (__uint128_t)n) >> 64);
    }
    """
    u64 sg_index_from_word(u64 w, u64 n) nogil

BACKEND_NAME = "c"


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
    """See ``_pykernels.sample_edges_kernel``; identical contract."""
    cdef i64[::1] members_v = np.ascontiguousarray(members, dtype=np.int64)
    cdef i64[::1] offsets_v = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef i64[::1] pa = np.ascontiguousarray(pair_a, dtype=np.int64)
    cdef i64[::1] pb = np.ascontiguousarray(pair_b, dtype=np.int64)
    cdef i64[::1] pc = np.ascontiguousarray(pair_counts, dtype=np.int64)

    cdef i64 n = n_vertices
    cdef i64 budget = retry_budget
    cdef Py_ssize_t n_pairs = pa.shape[0]

    cdef i64 total_slots = 0
    cdef Py_ssize_t p
    for p in range(n_pairs):
        total_slots += pc[p]

    edges_u_arr = np.empty(total_slots, dtype=np.int64)
    edges_v_arr = np.empty(total_slots, dtype=np.int64)
    placed_arr = np.zeros(n_pairs, dtype=np.int64)
    cdef i64[::1] edges_u = edges_u_arr
    cdef i64[::1] edges_v = edges_v_arr
    cdef i64[::1] placed_by_pair = placed_arr

    cdef unordered_set[u64] seen
    seen.reserve(<size_t>(total_slots * 2 + 16))

    buf_arr = np.empty(0, dtype=np.uint64)
    cdef u64[::1] buf = buf_arr
    cdef Py_ssize_t pos = 0
    cdef Py_ssize_t buf_len = 0

    cdef i64 placed = 0
    cdef i64 retries = 0
    cdef i64 a, b, count, off_a, off_b, len_a, len_b
    cdef i64 slot, attempt, u, v, lo, hi
    cdef u64 w1, w2, key

    for p in range(n_pairs):
        a = pa[p]
        b = pb[p]
        count = pc[p]
        off_a = offsets_v[a]
        len_a = offsets_v[a + 1] - off_a
        off_b = offsets_v[b]
        len_b = offsets_v[b + 1] - off_b
        if len_a == 0 or len_b == 0:
            continue
        for slot in range(count):
            for attempt in range(budget):
                if pos == buf_len:
                    buf_arr = np.ascontiguousarray(refill(), dtype=np.uint64)
                    buf = buf_arr
                    buf_len = buf.shape[0]
                    pos = 0
                w1 = buf[pos]
                pos += 1
                if pos == buf_len:
                    buf_arr = np.ascontiguousarray(refill(), dtype=np.uint64)
                    buf = buf_arr
                    buf_len = buf.shape[0]
                    pos = 0
                w2 = buf[pos]
                pos += 1
                u = members_v[off_a + <i64>sg_index_from_word(w1, <u64>len_a)]
                v = members_v[off_b + <i64>sg_index_from_word(w2, <u64>len_b)]
                if u == v:
                    retries += 1
                    continue
                if u < v:
                    lo = u
                    hi = v
                else:
                    lo = v
                    hi = u
                key = <u64>lo * <u64>n + <u64>hi
                if seen.count(key):
                    retries += 1
                    continue
                seen.insert(key)
                edges_u[placed] = lo
                edges_v[placed] = hi
                placed += 1
                placed_by_pair[p] += 1
                break

    edges = np.column_stack((edges_u_arr[:placed], edges_v_arr[:placed]))
    return edges, placed_arr, int(retries)


def edge_betweenness_kernel(indptr, adj, eid, n_edges):
    """See ``_pykernels.edge_betweenness_kernel``; identical contract."""
    cdef i64[::1] indptr_v = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef i64[::1] adj_v = np.ascontiguousarray(adj, dtype=np.int64)
    cdef i64[::1] eid_v = np.ascontiguousarray(eid, dtype=np.int64)
    cdef Py_ssize_t n = indptr_v.shape[0] - 1

    bc_arr = np.zeros(int(n_edges), dtype=np.float64)
    cdef double[::1] bc = bc_arr

    sigma_arr = np.empty(n, dtype=np.float64)
    dist_arr = np.empty(n, dtype=np.int64)
    delta_arr = np.empty(n, dtype=np.float64)
    order_arr = np.empty(n, dtype=np.int64)
    cdef double[::1] sigma = sigma_arr
    cdef i64[::1] dist = dist_arr
    cdef double[::1] delta = delta_arr
    cdef i64[::1] order = order_arr

    cdef Py_ssize_t s, head, tail, i, p
    cdef i64 u, w, v, du1, dw1
    cdef double su, coeff, c

    with nogil:
        for s in range(n):
            for i in range(n):
                sigma[i] = 0.0
                dist[i] = -1
                delta[i] = 0.0
            sigma[s] = 1.0
            dist[s] = 0
            order[0] = s
            head = 0
            tail = 1
            while head < tail:
                u = order[head]
                head += 1
                du1 = dist[u] + 1
                su = sigma[u]
                for p in range(indptr_v[u], indptr_v[u + 1]):
                    w = adj_v[p]
                    if dist[w] < 0:
                        dist[w] = du1
                        order[tail] = w
                        tail += 1
                    if dist[w] == du1:
                        sigma[w] += su
            for i in range(tail - 1, -1, -1):
                w = order[i]
                coeff = (1.0 + delta[w]) / sigma[w]
                dw1 = dist[w] - 1
                for p in range(indptr_v[w], indptr_v[w + 1]):
                    v = adj_v[p]
                    if dist[v] == dw1:
                        c = sigma[v] * coeff
                        bc[eid_v[p]] += c
                        delta[v] += c

    bc_arr /= 2.0
    return bc_arr

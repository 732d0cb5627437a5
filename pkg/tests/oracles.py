"""Independent brute-force oracles used to check the library.

Everything here is deliberately naive: plain loops, exact rational
arithmetic where possible, exhaustive enumeration. None of it shares code
with the package under test.
"""

from fractions import Fraction
from itertools import combinations


def vertex_category_counts(label_rows):
    """Count occurrences of each label vector."""
    counts = {}
    for row in label_rows:
        key = tuple(row)
        counts[key] = counts.get(key, 0) + 1
    return counts


def vertex_category_probs(label_rows):
    n = len(label_rows)
    return {k: Fraction(c, n) for k, c in vertex_category_counts(label_rows).items()}


def edge_pair_probs(label_rows, edges):
    """Unordered endpoint-label-pair probabilities over the edge set."""
    counts = {}
    for u, v in edges:
        a, b = tuple(label_rows[u]), tuple(label_rows[v])
        key = (a, b) if a <= b else (b, a)
        counts[key] = counts.get(key, 0) + 1
    m = len(edges)
    return {k: Fraction(c, m) for k, c in counts.items()}


def degrees(n, edges):
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return deg


def ccdf(n, edges):
    """P(deg >= d) for d = 0..max degree, as Fractions."""
    deg = degrees(n, edges)
    top = max(deg) if deg else 0
    return [Fraction(sum(1 for d in deg if d >= t), n) for t in range(top + 1)]


def modularity(n, edges, membership):
    """Q = sum_c [e_c/m - (d_c/2m)^2] with exact rationals."""
    m = len(edges)
    deg = degrees(n, edges)
    comms = set(membership)
    q = Fraction(0)
    for c in comms:
        e_c = sum(1 for u, v in edges if membership[u] == c and membership[v] == c)
        d_c = sum(deg[v] for v in range(n) if membership[v] == c)
        q += Fraction(e_c, m) - Fraction(d_c, 2 * m) ** 2
    return q


def all_partitions(items):
    """Every set partition of ``items`` (Bell-number many)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in all_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [first]] + part[i + 1 :]
        yield [[first]] + part


def best_partition_modularity(n, edges):
    """Exhaustive maximum modularity over all partitions (n <= ~10)."""
    best = None
    for part in all_partitions(range(n)):
        membership = [0] * n
        for cid, block in enumerate(part):
            for v in block:
                membership[v] = cid
        q = modularity(n, edges, membership)
        if best is None or q > best:
            best = q
    return best


def shortest_path_counts(n, adjacency, s):
    """BFS distances and shortest-path counts from s."""
    dist = {s: 0}
    sigma = {s: 1}
    frontier = [s]
    while frontier:
        nxt = []
        for u in frontier:
            for w in adjacency[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    sigma[w] = 0
                    nxt.append(w)
                if dist[w] == dist[u] + 1:
                    sigma[w] += sigma[u]
        frontier = nxt
    return dist, sigma


def edge_betweenness(n, edges):
    """Exact edge betweenness by counting shortest paths through each edge.

    For each ordered source pair (s, t) the fraction of s-t shortest paths
    using edge e is accumulated; the total is halved for undirected graphs.
    """
    adjacency = {v: [] for v in range(n)}
    for u, v in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    bc = {tuple(sorted(e)): Fraction(0) for e in edges}
    for s in range(n):
        dist, sigma = shortest_path_counts(n, adjacency, s)
        for t in range(n):
            if t == s or t not in dist:
                continue
            # paths from s to t through edge (u, v) with dist[u]+1 == dist[v]
            for u, v in edges:
                a, b = (u, v) if dist.get(u, -1) < dist.get(v, -1) else (v, u)
                if a in dist and b in dist and dist[b] == dist[a] + 1:
                    if dist[b] <= dist[t]:
                        paths_through = sigma[a] * paths_between(
                            adjacency, dist, sigma, b, t
                        )
                        if paths_through:
                            bc[tuple(sorted((u, v)))] += Fraction(
                                paths_through, sigma[t]
                            )
    return {k: v / 2 for k, v in bc.items()}


def paths_between(adjacency, dist, sigma, b, t):
    """Number of shortest paths from b to t consistent with dist from s."""
    if b == t:
        return 1
    if dist[b] >= dist.get(t, -1):
        return 0
    total = 0
    for w in adjacency[b]:
        if w in dist and dist[w] == dist[b] + 1:
            total += paths_between(adjacency, dist, sigma, w, t)
    return total


def ego_vertices(n, edges, seeds, radius):
    """Vertices within ``radius`` hops of any seed, by repeated expansion."""
    adjacency = {v: set() for v in range(n)}
    for u, v in edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    current = set(seeds)
    for _ in range(radius):
        current = current | {w for u in current for w in adjacency[u]}
    return current


def linchpin_scores(n, edges, attr):
    """Direct readout of the definition."""
    adjacency = {v: set() for v in range(n)}
    for u, v in edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    scores = []
    for v in range(n):
        nbrs = adjacency[v]
        if not nbrs:
            scores.append(Fraction(0))
            continue
        unique = 0
        for u in nbrs:
            if not any(attr[w] == attr[v] for w in adjacency[u] if w != v):
                unique += 1
        scores.append(Fraction(unique, len(nbrs)))
    return scores


def homophily_fractions(n, edges, attr):
    """x(v) for non-isolated v: fraction of neighbors sharing attr[v]."""
    adjacency = {v: [] for v in range(n)}
    for u, v in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    out = {}
    for v in range(n):
        if adjacency[v]:
            same = sum(1 for u in adjacency[v] if attr[u] == attr[v])
            out[v] = Fraction(same, len(adjacency[v]))
    return out


def total_variation(p, q):
    """TV distance between two dicts of probabilities."""
    keys = set(p) | set(q)
    return sum(abs(Fraction(p.get(k, 0)) - Fraction(q.get(k, 0))) for k in keys) / 2

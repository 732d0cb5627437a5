"""Bundled example data and synthetic fixture generators.

The karate-club interaction network (34 vertices, 78 edges) ships with the
package as the standard small demonstration graph. It carries no intrinsic
attributes, so :func:`add_structure_correlated_labels` synthesises two
categorical labels whose sampling weights follow the degree and closeness
quantiles: the expected level of each label tracks the statistic while
individual assignments stay noisy. That gives generation something real to
recover without fixing labels deterministically to structure.

The block-model generators below provide reproducible community-structured
fixtures for tests and benchmarks.
"""

from __future__ import annotations

import csv
from importlib import resources

import numpy as np

from . import rng
from .errors import InputError
from .graphcore import LabelSchema, PropertyGraph

__all__ = [
    "karate_graph",
    "add_structure_correlated_labels",
    "planted_specialty_graph",
    "two_community_gnm",
]

DEGREE_LABEL = "label_deg3"
CLOSENESS_LABEL = "label_close4"


def karate_graph() -> PropertyGraph:
    """The bundled 34-vertex, 78-edge karate interaction network."""
    path = resources.files("surrograph").joinpath("data/karate_edges.csv")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        next(reader)  # header
        edges = [(int(u), int(v)) for u, v in reader]
    n = max(max(u, v) for u, v in edges) + 1
    return PropertyGraph(
        n, np.array(edges, dtype=np.int64), node_ids=[str(v) for v in range(n)]
    )


def _quantile_tiers(values: np.ndarray, n_tiers: int) -> np.ndarray:
    qs = np.quantile(values, [k / n_tiers for k in range(1, n_tiers)])
    return np.searchsorted(qs, values, side="left")


def _weighted_levels(
    tiers: np.ndarray, n_levels: int, concentration: float, gen: np.random.Generator
) -> np.ndarray:
    """Sample one level per vertex, concentrated on the vertex's tier."""
    off = (1.0 - concentration) / (n_levels - 1)
    probs = np.full((len(tiers), n_levels), off)
    probs[np.arange(len(tiers)), tiers] = concentration
    u = gen.random(len(tiers))
    return (u[:, None] > np.cumsum(probs, axis=1)).sum(axis=1)


def add_structure_correlated_labels(
    g: PropertyGraph, seed: int, concentration: float = 0.7
) -> PropertyGraph:
    """Append two synthetic labels tied to degree and closeness quantiles.

    ``label_deg3`` has three levels whose sampling weights follow the
    degree tertile of each vertex; ``label_close4`` has four levels
    following the closeness-centrality quartile. ``concentration`` is the
    probability mass placed on the matching level.
    """
    if not 0.0 < concentration <= 1.0:
        raise InputError("concentration must be in (0, 1]")
    from .graphcore import closeness_centrality

    deg_tiers = _quantile_tiers(g.degrees().astype(np.float64), 3)
    close_tiers = _quantile_tiers(closeness_centrality(g), 4)

    gen_deg = rng.stage_generator(seed, rng.STAGE_SYNTHETIC_LABELS + ":deg")
    gen_close = rng.stage_generator(seed, rng.STAGE_SYNTHETIC_LABELS + ":close")
    deg_levels = _weighted_levels(deg_tiers, 3, concentration, gen_deg)
    close_levels = _weighted_levels(close_tiers, 4, concentration, gen_close)

    schema = g.schema.extended(DEGREE_LABEL, ("d1", "d2", "d3")).extended(
        CLOSENESS_LABEL, ("c1", "c2", "c3", "c4")
    )
    codes = np.column_stack((g.label_codes, deg_levels, close_levels))
    return PropertyGraph(
        g.n_vertices,
        g.edges,
        schema,
        codes,
        node_ids=g.node_ids,
        passive=g.passive,
        column_order=g.column_order,
    )


def planted_specialty_graph(
    block_sizes,
    p_in: float,
    p_out: float,
    seed: int,
    specialty_mixes=None,
) -> PropertyGraph:
    """Random block-structured graph with an optional specialty label.

    Edges appear independently with probability ``p_in`` within a block
    and ``p_out`` across blocks. When ``specialty_mixes`` is given (one
    ``{value: probability}`` dict per block), vertices get a
    ``label_specialty`` drawn from their block's mix; otherwise the only
    label is ``label_block``.
    """
    block_sizes = [int(s) for s in block_sizes]
    if any(s < 1 for s in block_sizes):
        raise InputError("block sizes must be positive")
    n = sum(block_sizes)
    block = np.repeat(np.arange(len(block_sizes)), block_sizes)

    gen = rng.stage_generator(seed, rng.STAGE_FIXTURE)
    iu, ju = np.triu_indices(n, k=1)
    prob = np.where(block[iu] == block[ju], p_in, p_out)
    mask = gen.random(len(iu)) < prob
    edges = np.column_stack((iu[mask], ju[mask])).astype(np.int64)

    if specialty_mixes is None:
        schema = LabelSchema(
            ["label_block"], [tuple(str(b) for b in range(len(block_sizes)))]
        )
        codes = block.reshape(-1, 1).astype(np.int64)
    else:
        if len(specialty_mixes) != len(block_sizes):
            raise InputError("one specialty mix required per block")
        values = sorted({v for mix in specialty_mixes for v in mix})
        value_code = {v: i for i, v in enumerate(values)}
        codes = np.empty((n, 1), dtype=np.int64)
        start = 0
        for b, size in enumerate(block_sizes):
            mix = specialty_mixes[b]
            opts = sorted(mix)
            p = np.array([mix[o] for o in opts], dtype=np.float64)
            p = p / p.sum()
            drawn = gen.choice(len(opts), size=size, p=p)
            codes[start : start + size, 0] = [value_code[opts[k]] for k in drawn]
            start += size
        schema = LabelSchema(["label_specialty"], [tuple(values)])

    return PropertyGraph(n, edges, schema, codes)


def two_community_gnm(
    n_per_block: int, m_within_each: int, m_between: int, seed: int
) -> PropertyGraph:
    """Two-block graph with exact edge counts (G(n, m) per region).

    Used by the scaling benchmark, where the total edge count must hit a
    target precisely.
    """
    n = 2 * n_per_block
    gen = rng.stage_generator(seed, rng.STAGE_FIXTURE)
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []

    def fill(count: int, lo_a: int, hi_a: int, lo_b: int, hi_b: int) -> None:
        while count > 0:
            u = int(gen.integers(lo_a, hi_a))
            v = int(gen.integers(lo_b, hi_b))
            if u == v:
                continue
            key = (u, v) if u < v else (v, u)
            if key in seen:
                continue
            seen.add(key)
            edges.append(key)
            count -= 1

    cap = n_per_block * (n_per_block - 1) // 2
    if m_within_each > cap or m_between > n_per_block * n_per_block:
        raise InputError("requested edge counts exceed region capacity")
    fill(m_within_each, 0, n_per_block, 0, n_per_block)
    fill(m_within_each, n_per_block, n, n_per_block, n)
    fill(m_between, 0, n_per_block, n_per_block, n)

    block = np.repeat(np.arange(2), n_per_block).reshape(-1, 1).astype(np.int64)
    schema = LabelSchema(["label_block"], [("0", "1")])
    return PropertyGraph(n, np.array(edges, dtype=np.int64), schema, block)

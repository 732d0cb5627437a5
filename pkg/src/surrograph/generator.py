"""Target-graph sampling from the vertex and edge category distributions.

Generation runs in three steps: allocate vertex counts per category,
lay the vertices out contiguously (the category-to-vertex map), then draw
edges pair by pair with rejection of self-loops and duplicates. With
deterministic (largest-remainder) allocation and matching target sizes,
the source category distributions are reproduced exactly, up to edge
slots abandoned when a pair's simple-edge capacity is exhausted.

Everything is driven by per-stage seeded streams (see
:mod:`surrograph.rng`), so a given seed and config always produce the same
graph, bit for bit, on either kernel backend.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, rng
from .errors import InputError
from .graphcore import PropertyGraph
from .labels import (
    EdgeCategoryDistribution,
    JointCategoryIndex,
    VertexCategoryDistribution,
)

__all__ = [
    "GenerationConfig",
    "GenerationReport",
    "CategoryToVertexMap",
    "largest_remainder_allocation",
    "allocate_vertices",
    "build_category_to_vertex_map",
    "sample_edges",
    "generate_graph",
]

ALLOCATION_MODES = ("deterministic", "multinomial")


@dataclass(frozen=True)
class GenerationConfig:
    """Target sizes and sampling policy for one generation run."""

    n_t: int
    m_t: int
    seed: int
    allocation_mode: str = "deterministic"
    retry_budget: int = 100

    def __post_init__(self):
        if self.n_t < 1:
            raise InputError("target vertex count must be >= 1")
        if self.m_t < 0:
            raise InputError("target edge count must be >= 0")
        if self.retry_budget < 1:
            raise InputError("retry budget must be >= 1")
        if self.allocation_mode not in ALLOCATION_MODES:
            raise InputError(
                f"allocation mode must be one of {ALLOCATION_MODES}, "
                f"got {self.allocation_mode!r}"
            )


@dataclass
class GenerationReport:
    """Bookkeeping for one sampling run.

    ``edges_placed + edges_abandoned == m_t``. ``retries_total`` counts
    rejected draws (self-loops and duplicates). ``elapsed_seconds`` is
    intentionally excluded from serialised payloads so that artifact files
    stay byte-identical across reruns.
    """

    m_t: int
    edges_placed: int
    edges_abandoned: int
    retries_total: int
    abandoned_by_pair: dict[tuple[int, int], int] = field(default_factory=dict)
    elapsed_seconds: float = 0.0

    def to_payload(self) -> dict:
        return {
            "m_t": self.m_t,
            "edges_placed": self.edges_placed,
            "edges_abandoned": self.edges_abandoned,
            "retries_total": self.retries_total,
            "abandoned_by_pair": {
                f"{a},{b}": c for (a, b), c in sorted(self.abandoned_by_pair.items())
            },
        }


def largest_remainder_allocation(
    probs: np.ndarray,
    total: int,
    counts: np.ndarray | None = None,
    denom: int | None = None,
) -> np.ndarray:
    """Integer allocation of ``total`` items proportional to ``probs``.

    Floors the ideal shares and hands the remaining items to the largest
    fractional parts, ties broken by lower index. When the distribution
    came from integer ``counts / denom``, the shares are computed in exact
    integer arithmetic, which makes same-size regeneration reproduce the
    source counts exactly rather than within float error.
    """
    if counts is not None and denom:
        counts = np.asarray(counts, dtype=np.int64)
        num = counts * int(total)
        floors = num // denom
        rema = num % denom  # integer remainders, exact comparison
        remaining = int(total - floors.sum())
        if remaining:
            order = np.lexsort((np.arange(len(counts)), -rema))
            floors[order[:remaining]] += 1
        return floors.astype(np.int64)

    probs = np.asarray(probs, dtype=np.float64)
    ideal = probs * float(total)
    floors = np.floor(ideal).astype(np.int64)
    frac = ideal - floors
    remaining = int(total - floors.sum())
    if remaining > 0:
        order = np.lexsort((np.arange(len(probs)), -frac))
        floors[order[:remaining]] += 1
    elif remaining < 0:  # float-sum overshoot; trim from the smallest fractions
        order = np.lexsort((np.arange(len(probs)), frac))
        for i in order:
            if remaining == 0:
                break
            if floors[i] > 0:
                floors[i] -= 1
                remaining += 1
    return floors


def allocate_vertices(
    p_l: VertexCategoryDistribution,
    n_t: int,
    mode: str = "deterministic",
    seed: int = 0,
) -> np.ndarray:
    """Per-category vertex counts summing to ``n_t``.

    Deterministic mode rounds ``n_t * P_L`` by largest remainder;
    multinomial mode draws ``n_t`` labels i.i.d. from ``P_L``.
    """
    if n_t < 1:
        raise InputError("target vertex count must be >= 1")
    if mode == "deterministic":
        return largest_remainder_allocation(
            p_l.probs, n_t, counts=p_l.counts, denom=p_l.n_vertices or None
        )
    if mode == "multinomial":
        gen = rng.stage_generator(seed, rng.STAGE_VERTEX_ALLOCATION)
        return gen.multinomial(n_t, p_l.probs).astype(np.int64)
    raise InputError(f"unknown allocation mode {mode!r}")


class CategoryToVertexMap:
    """Contiguous block of generated vertex ids for each category.

    Category ``j`` owns ids ``offsets[j]..offsets[j+1]-1``; the blocks
    partition ``0..n_t-1`` in category-index order.
    """

    def __init__(self, counts: np.ndarray):
        counts = np.asarray(counts, dtype=np.int64)
        if np.any(counts < 0):
            raise InputError("negative category count")
        self.counts = counts
        self.offsets = np.zeros(len(counts) + 1, dtype=np.int64)
        np.cumsum(counts, out=self.offsets[1:])
        self.n_vertices = int(self.offsets[-1])

    def vertices_of(self, j: int) -> range:
        return range(int(self.offsets[j]), int(self.offsets[j + 1]))

    def members_array(self) -> np.ndarray:
        return np.arange(self.n_vertices, dtype=np.int64)

    def category_codes(self, index: JointCategoryIndex) -> np.ndarray:
        """Label codes ``(n_t, M)`` implied by the block layout."""
        m = index.schema.n_labels
        codes = np.empty((self.n_vertices, m), dtype=np.int64)
        for j in np.flatnonzero(self.counts):
            codes[self.offsets[j] : self.offsets[j + 1]] = index.codes_of_category(
                int(j)
            )
        return codes


def build_category_to_vertex_map(counts: np.ndarray) -> CategoryToVertexMap:
    """Assign generated vertex ids to categories, block-contiguously."""
    return CategoryToVertexMap(counts)


def _allocate_edge_slots(
    p_c: EdgeCategoryDistribution, m_t: int, mode: str, seed: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Slots per unordered category pair, in sorted pair order."""
    pairs = p_c.sorted_pairs()
    pair_a = np.array([a for a, _ in pairs], dtype=np.int64)
    pair_b = np.array([b for _, b in pairs], dtype=np.int64)
    if mode == "deterministic":
        probs = np.array([p_c.pair_probs[k] for k in pairs], dtype=np.float64)
        counts = None
        if p_c.pair_counts is not None:
            counts = np.array([p_c.pair_counts[k] for k in pairs], dtype=np.int64)
        slots = largest_remainder_allocation(
            probs, m_t, counts=counts, denom=p_c.n_edges or None
        )
    elif mode == "multinomial":
        gen = rng.stage_generator(seed, rng.STAGE_EDGE_ALLOCATION)
        probs = np.array([p_c.pair_probs[k] for k in pairs], dtype=np.float64)
        slots = gen.multinomial(m_t, probs).astype(np.int64)
    else:
        raise InputError(f"unknown allocation mode {mode!r}")
    return pair_a, pair_b, slots


def sample_edges(
    p_c: EdgeCategoryDistribution,
    c2v: CategoryToVertexMap,
    m_t: int,
    retry_budget: int,
    seed: int,
    allocation_mode: str = "deterministic",
) -> tuple[np.ndarray, GenerationReport]:
    """Draw up to ``m_t`` simple edges honouring the pair distribution.

    Each slot's endpoints are drawn uniformly from the pair's vertex
    blocks; self-loops and duplicates are redrawn up to ``retry_budget``
    attempts, after which the slot is abandoned and reported. A pair whose
    vertex block is empty abandons all its slots without drawing.
    """
    if m_t < 0:
        raise InputError("target edge count must be >= 0")
    start = time.perf_counter()
    if m_t == 0:
        return (
            np.empty((0, 2), dtype=np.int64),
            GenerationReport(0, 0, 0, 0, {}, time.perf_counter() - start),
        )
    pair_a, pair_b, slots = _allocate_edge_slots(p_c, m_t, allocation_mode, seed)
    stream = rng.WordStream(seed, rng.STAGE_EDGE_SAMPLING)
    edges, placed_by_pair, retries = _kernels.sample_edges_kernel(
        c2v.members_array(),
        c2v.offsets,
        pair_a,
        pair_b,
        slots,
        c2v.n_vertices,
        retry_budget,
        stream.refill,
    )
    abandoned = slots - placed_by_pair
    report = GenerationReport(
        m_t=int(slots.sum()),
        edges_placed=int(placed_by_pair.sum()),
        edges_abandoned=int(abandoned.sum()),
        retries_total=int(retries),
        abandoned_by_pair={
            (int(pair_a[i]), int(pair_b[i])): int(abandoned[i])
            for i in np.flatnonzero(abandoned)
        },
        elapsed_seconds=time.perf_counter() - start,
    )
    return edges, report


def generate_graph(
    index: JointCategoryIndex,
    p_l: VertexCategoryDistribution,
    p_c: EdgeCategoryDistribution | None,
    config: GenerationConfig,
) -> tuple[PropertyGraph, GenerationReport]:
    """Full sampling run: vertices, category map, then edges.

    The generated graph carries the label vectors implied by the category
    blocks, including any augmentation labels; callers strip those before
    release. Identical seed and config give a bit-identical graph.
    """
    if p_l.index != index:
        raise InputError("vertex distribution was estimated over a different index")
    if p_c is not None and p_c.index != index:
        raise InputError("edge distribution was estimated over a different index")
    if p_c is None and config.m_t > 0:
        raise InputError("edge distribution required when m_t > 0")

    counts = allocate_vertices(p_l, config.n_t, config.allocation_mode, config.seed)
    c2v = build_category_to_vertex_map(counts)
    if config.m_t > 0:
        edges, report = sample_edges(
            p_c,
            c2v,
            config.m_t,
            config.retry_budget,
            config.seed,
            config.allocation_mode,
        )
    else:
        edges = np.empty((0, 2), dtype=np.int64)
        report = GenerationReport(0, 0, 0, 0, {})

    graph = PropertyGraph(
        config.n_t,
        edges,
        index.schema,
        c2v.category_codes(index) if index.schema.n_labels else None,
    )
    return graph, report

"""Reading and writing property graphs and run configuration.

Graphs travel as two CSV files: a nodes table (``node_id`` plus one column
per attribute) and an edges table (``src,dst``). Only columns prefixed
``label_`` enter the label schema; everything else is carried as passive
metadata and, being potentially identifying, is excluded from surrogate
output by default. Ingest is forgiving about messy source data: self-loops
and duplicate (or reversed) edges are dropped and counted rather than
rejected. Strictness is reserved for structural errors, which carry the
offending row number.

Run configuration is a flat ``key = value`` file, diff-friendly for
reproducibility archives; CLI flags override file values.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InputError
from .graphcore import LabelSchema, PropertyGraph

__all__ = [
    "IngestReport",
    "LABEL_PREFIX",
    "load_graph_bundle",
    "read_property_graph",
    "write_property_graph",
    "read_config",
    "write_config",
    "CONFIG_KEYS",
]

logger = logging.getLogger(__name__)

LABEL_PREFIX = "label_"


@dataclass
class IngestReport:
    """What ingest had to clean up."""

    self_loops_dropped: int = 0
    duplicate_edges_dropped: int = 0
    label_columns: tuple[str, ...] = ()
    passive_columns: tuple[str, ...] = ()


def load_graph_bundle(nodes_path, edges_path) -> tuple[PropertyGraph, IngestReport]:
    """Read a nodes/edges CSV pair into a graph plus an ingest report."""
    nodes_path = Path(nodes_path)
    edges_path = Path(edges_path)

    with open(nodes_path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{nodes_path}: empty file (missing header)") from None
        if "node_id" not in header:
            raise InputError(f"{nodes_path}: header must contain a node_id column")
        id_col = header.index("node_id")
        rows = list(reader)
    if not rows:
        raise InputError(f"{nodes_path}: no node rows")

    other_cols = [h for i, h in enumerate(header) if i != id_col]
    if len(set(header)) != len(header):
        raise InputError(f"{nodes_path}: duplicate column names in header")
    label_cols = [h for h in other_cols if h.startswith(LABEL_PREFIX)]
    passive_cols = [h for h in other_cols if not h.startswith(LABEL_PREFIX)]
    col_pos = {h: i for i, h in enumerate(header)}

    node_ids: list[str] = []
    id_to_dense: dict[str, int] = {}
    label_values: dict[str, list[str]] = {c: [] for c in label_cols}
    passive_values: dict[str, list[str]] = {c: [] for c in passive_cols}
    for rownum, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise InputError(f"{nodes_path}:{rownum}: expected {len(header)} fields")
        nid = row[id_col]
        if nid in id_to_dense:
            raise InputError(f"{nodes_path}:{rownum}: duplicate node id {nid!r}")
        id_to_dense[nid] = len(node_ids)
        node_ids.append(nid)
        for c in label_cols:
            label_values[c].append(row[col_pos[c]])
        for c in passive_cols:
            passive_values[c].append(row[col_pos[c]])

    # domains sorted for determinism under row reordering
    schema = LabelSchema(
        label_cols, [tuple(sorted(set(label_values[c]))) for c in label_cols]
    )
    codes = np.array(
        [
            [schema.code_of(k, label_values[c][v]) for k, c in enumerate(label_cols)]
            for v in range(len(node_ids))
        ],
        dtype=np.int64,
    ).reshape(len(node_ids), len(label_cols))

    with open(edges_path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            eheader = next(reader)
        except StopIteration:
            raise InputError(f"{edges_path}: empty file (missing header)") from None
        if "src" not in eheader or "dst" not in eheader:
            raise InputError(f"{edges_path}: header must contain src and dst columns")
        src_col, dst_col = eheader.index("src"), eheader.index("dst")
        seen: set[tuple[int, int]] = set()
        edges: list[tuple[int, int]] = []
        self_loops = 0
        duplicates = 0
        for rownum, row in enumerate(reader, start=2):
            if len(row) < max(src_col, dst_col) + 1:
                raise InputError(f"{edges_path}:{rownum}: short row")
            try:
                u = id_to_dense[row[src_col]]
            except KeyError:
                raise InputError(
                    f"{edges_path}:{rownum}: unknown node {row[src_col]!r}"
                ) from None
            try:
                v = id_to_dense[row[dst_col]]
            except KeyError:
                raise InputError(
                    f"{edges_path}:{rownum}: unknown node {row[dst_col]!r}"
                ) from None
            if u == v:
                self_loops += 1
                continue
            key = (u, v) if u < v else (v, u)
            if key in seen:
                duplicates += 1
                continue
            seen.add(key)
            edges.append(key)

    if self_loops or duplicates:
        logger.warning(
            "%s: dropped %d self-loops and %d duplicate edges",
            edges_path,
            self_loops,
            duplicates,
        )

    graph = PropertyGraph(
        len(node_ids),
        np.array(edges, dtype=np.int64).reshape(len(edges), 2),
        schema,
        codes,
        node_ids=node_ids,
        passive=passive_values if passive_cols else None,
        column_order=tuple(other_cols),
    )
    report = IngestReport(
        self_loops_dropped=self_loops,
        duplicate_edges_dropped=duplicates,
        label_columns=tuple(label_cols),
        passive_columns=tuple(passive_cols),
    )
    return graph, report


def read_property_graph(nodes_path, edges_path) -> PropertyGraph:
    return load_graph_bundle(nodes_path, edges_path)[0]


def write_property_graph(
    g: PropertyGraph, nodes_path, edges_path, include_passive: bool = True
) -> None:
    """Emit the nodes/edges CSV pair.

    Source ids are preserved when the graph has them; otherwise (generated
    graphs) vertices are emitted as ``n0..n{V-1}`` so no source identifier
    can leak into a surrogate. Column order from the original file is kept.
    """
    ids = list(g.node_ids) if g.node_ids else [f"n{v}" for v in range(g.n_vertices)]

    columns = list(g.column_order) if g.column_order is not None else None
    if columns is None:
        columns = list(g.schema.names)
        if include_passive and g.passive:
            columns += list(g.passive.keys())
    else:
        columns = [
            c
            for c in columns
            if c in g.schema.names or (include_passive and g.passive and c in g.passive)
        ]

    with open(nodes_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["node_id"] + columns)
        label_pos = {name: k for k, name in enumerate(g.schema.names)}
        for v in range(g.n_vertices):
            row = [ids[v]]
            for c in columns:
                if c in label_pos:
                    k = label_pos[c]
                    row.append(g.schema.domains[k][g.label_codes[v, k]])
                else:
                    row.append(g.passive[c][v])
            writer.writerow(row)

    with open(edges_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["src", "dst"])
        for u, v in g.edges:
            writer.writerow([ids[u], ids[v]])


# --- run configuration -------------------------------------------------------

# key -> (parser, description)
CONFIG_KEYS: dict[str, tuple] = {
    "n_t": (int, "target vertex count"),
    "m_t": (int, "target edge count"),
    "seed": (int, "base RNG seed"),
    "grid": (
        lambda s: tuple(int(x) for x in str(s).split(",") if x != ""),
        "degree-bin counts to evaluate, comma separated",
    ),
    "tolerance": (float, "NRMSE tolerance for tuning"),
    "community_algo": (str, "edge-betweenness | fast-greedy | none"),
    "centrality_bins": (
        lambda s: tuple(float(x) for x in str(s).split(",") if x != ""),
        "linchpin-centrality cut points",
    ),
    "retry_budget": (int, "max rejection retries per edge"),
    "allocation": (str, "deterministic | multinomial"),
    "seeds_per_eval": (int, "generations averaged per tuning candidate"),
    "replicates": (int, "surrogate graphs to generate"),
    "keep_aug_labels": (
        lambda s: str(s).lower() in ("1", "true", "yes"),
        "retain augmentation labels in surrogate output",
    ),
    "report": (str, "csv | jsonl"),
    "jobs": (int, "parallel workers for tuning/replicates"),
}


def read_config(path) -> dict:
    """Parse a flat ``key = value`` config file."""
    values: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InputError(f"{path}:{lineno}: expected key = value")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in CONFIG_KEYS:
                raise InputError(f"{path}:{lineno}: unknown config key {key!r}")
            parser = CONFIG_KEYS[key][0]
            try:
                values[key] = parser(value)
            except ValueError:
                raise InputError(
                    f"{path}:{lineno}: cannot parse value for {key!r}"
                ) from None
    return values


def write_config(values: dict, path) -> None:
    with open(path, "w") as fh:
        for key in CONFIG_KEYS:
            if key in values and values[key] is not None:
                v = values[key]
                if isinstance(v, (tuple, list)):
                    v = ",".join(str(x) for x in v)
                fh.write(f"{key} = {v}\n")

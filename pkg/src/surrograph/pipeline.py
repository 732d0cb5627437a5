"""End-to-end surrogate synthesis: augment, tune, generate, certify.

Stage order is fixed: community detection on the source, community label
append, optional centrality-bin append (linchpin centrality computed
against the community label), degree-bin tuning and append, distribution
estimation, generation, then fidelity metrics. Community detection runs on
the source only; surrogates are re-clustered inside metrics, never to
relabel generation. If a tolerance is configured and the pre-degree
pipeline already meets it, the degree stage is skipped and recorded.

Augmentation labels encode source structure, so they are stripped from
released surrogates unless explicitly retained for diagnostics.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import augment as aug
from .community import (
    CommunityAssignment,
    edge_betweenness_communities,
    greedy_modularity_communities,
    linchpin_centrality,
)
from .errors import InputError
from .generator import GenerationConfig, GenerationReport, generate_graph
from .graphcore import PropertyGraph
from .labels import (
    enumerate_joint_categories,
    estimate_edge_category_distribution,
    estimate_vertex_category_distribution,
)
from .metrics import (
    FidelityReport,
    ReplicationResult,
    compare_communities,
    degree_ccdf,
    fit_homophily_regression,
    homophily_proportion,
    nrmse,
    replicate_regression,
)

__all__ = ["PipelineSpec", "PipelineResult", "run_pipeline", "write_artifacts"]

logger = logging.getLogger(__name__)

COMMUNITY_ALGOS = ("edge-betweenness", "fast-greedy", "none")


@dataclass(frozen=True)
class PipelineSpec:
    """Configuration of one synthesis run."""

    seed: int
    n_t: int | None = None  # default: source size
    m_t: int | None = None
    community_algo: str = "fast-greedy"
    centrality_bins: tuple[float, ...] | None = None  # e.g. (0.0, 0.2)
    grid: tuple[int, ...] = ()
    tolerance: float | None = None
    seeds_per_eval: int = 3
    stop_at_tolerance: bool = False
    allocation_mode: str = "deterministic"
    retry_budget: int = 100
    replicates: int = 1
    keep_aug_labels: bool = False
    regression_attribute: str | None = None
    regression_targets: tuple[str, ...] = ()
    jobs: int = 1

    def __post_init__(self):
        if self.community_algo not in COMMUNITY_ALGOS:
            raise InputError(
                f"community algorithm must be one of {COMMUNITY_ALGOS}, "
                f"got {self.community_algo!r}"
            )
        if self.replicates < 1:
            raise InputError("replicates must be >= 1")
        if self.grid and self.seeds_per_eval < 1:
            raise InputError("seeds_per_eval must be >= 1")
        if self.centrality_bins is not None and self.community_algo == "none":
            raise InputError(
                "centrality augmentation requires community labels; "
                "enable a community algorithm"
            )
        if self.regression_attribute and not self.regression_targets:
            raise InputError("regression needs at least one target value")


@dataclass
class PipelineResult:
    """Everything a run produced, before any artifact is written."""

    spec: PipelineSpec
    source: PropertyGraph
    generated: list[PropertyGraph]
    generation_reports: list[GenerationReport]
    fidelity: FidelityReport
    tune: aug.TuneResult | None
    source_communities: CommunityAssignment | None
    replication: ReplicationResult | None
    appended_labels: tuple[str, ...]
    degree_stage_skipped: bool = False


def detect_communities(g: PropertyGraph, algo: str) -> CommunityAssignment:
    if algo == "edge-betweenness":
        return edge_betweenness_communities(g)
    if algo == "fast-greedy":
        return greedy_modularity_communities(g)
    raise InputError(f"unknown community algorithm {algo!r}")


def _mean_nrmse(source: PropertyGraph, g_aug: PropertyGraph, spec: PipelineSpec) -> float:
    """Mean degree-CCDF NRMSE of same-size generations from g_aug's labels."""
    idx = enumerate_joint_categories(g_aug.schema)
    p_l = estimate_vertex_category_distribution(g_aug, idx)
    p_c = estimate_edge_category_distribution(g_aug, idx) if g_aug.n_edges else None
    src = degree_ccdf(source)
    errors = []
    for i in range(spec.seeds_per_eval):
        config = GenerationConfig(
            n_t=g_aug.n_vertices,
            m_t=g_aug.n_edges,
            seed=spec.seed + i,
            allocation_mode=spec.allocation_mode,
            retry_budget=spec.retry_budget,
        )
        generated, _ = generate_graph(idx, p_l, p_c, config)
        errors.append(nrmse(src, degree_ccdf(generated)))
    return float(np.mean(errors))


def run_pipeline(g_source: PropertyGraph, spec: PipelineSpec) -> PipelineResult:
    """Execute the full synthesis and certification sequence."""
    if g_source.n_vertices == 0:
        raise InputError("source graph is empty")

    appended: list[str] = []
    g_aug = g_source
    source_comm: CommunityAssignment | None = None

    if spec.community_algo != "none":
        source_comm = detect_communities(g_source, spec.community_algo)
        g_aug = aug.append_community_label(g_aug, source_comm)
        appended.append(aug.COMMUNITY_LABEL)
        logger.info(
            "community stage: %d communities on the source",
            source_comm.n_communities,
        )

    if spec.centrality_bins is not None:
        scores = linchpin_centrality(g_aug, aug.COMMUNITY_LABEL)
        g_aug = aug.append_centrality_bin_label(g_aug, scores, spec.centrality_bins)
        appended.append(aug.CENTRALITY_BIN_LABEL)

    tune_result: aug.TuneResult | None = None
    degree_skipped = False
    if spec.grid:
        if spec.tolerance is not None:
            pre_error = _mean_nrmse(g_source, g_aug, spec)
            if pre_error <= spec.tolerance:
                degree_skipped = True
                logger.info(
                    "pre-degree error %.4f already meets tolerance %.4f; "
                    "skipping degree augmentation",
                    pre_error,
                    spec.tolerance,
                )
        if not degree_skipped:
            tune_result = aug.tune_degree_bins(
                g_aug,
                spec.grid,
                spec.tolerance,
                spec.seeds_per_eval,
                spec.seed,
                retry_budget=spec.retry_budget,
                stop_at_tolerance=spec.stop_at_tolerance,
                jobs=spec.jobs,
            )
            g_aug = aug.append_degree_bin_label(g_aug, tune_result.selected_n_b)
            appended.append(aug.DEGREE_BIN_LABEL)

    idx = enumerate_joint_categories(g_aug.schema)
    p_l = estimate_vertex_category_distribution(g_aug, idx)
    p_c = estimate_edge_category_distribution(g_aug, idx) if g_aug.n_edges else None

    n_t = spec.n_t if spec.n_t is not None else g_source.n_vertices
    m_t = spec.m_t if spec.m_t is not None else g_source.n_edges

    generated: list[PropertyGraph] = []
    reports: list[GenerationReport] = []
    for r in range(spec.replicates):
        config = GenerationConfig(
            n_t=n_t,
            m_t=m_t,
            seed=spec.seed + r,
            allocation_mode=spec.allocation_mode,
            retry_budget=spec.retry_budget,
        )
        g_gen, report = generate_graph(idx, p_l, p_c, config)
        generated.append(g_gen)
        reports.append(report)

    src_ccdf = degree_ccdf(g_source)
    per_replicate = [nrmse(src_ccdf, degree_ccdf(g)) for g in generated]
    gen_ccdf = degree_ccdf(generated[0])

    gen_comm = None
    concordance = None
    if spec.community_algo != "none" and generated[0].n_edges > 0:
        gen_comm = detect_communities(generated[0], spec.community_algo)
        concordance = compare_communities(source_comm, gen_comm)

    source_reg = None
    gen_reg = None
    replication = None
    if spec.regression_attribute:
        sample = homophily_proportion(
            g_source, spec.regression_attribute, spec.regression_targets
        )
        source_reg = fit_homophily_regression(sample.y, sample.x)
        gen_sample = homophily_proportion(
            generated[0], spec.regression_attribute, spec.regression_targets
        )
        gen_reg = fit_homophily_regression(gen_sample.y, gen_sample.x)
        if spec.replicates >= 2:

            def regenerate(seed: int) -> PropertyGraph:
                config = GenerationConfig(
                    n_t=n_t,
                    m_t=m_t,
                    seed=seed,
                    allocation_mode=spec.allocation_mode,
                    retry_budget=spec.retry_budget,
                )
                return generate_graph(idx, p_l, p_c, config)[0]

            replication = replicate_regression(
                regenerate,
                spec.regression_attribute,
                spec.regression_targets,
                spec.replicates,
                spec.seed,
            )

    fidelity = FidelityReport(
        source_ccdf=src_ccdf,
        generated_ccdf=gen_ccdf,
        nrmse=per_replicate[0],
        source_communities=source_comm,
        generated_communities=gen_comm,
        concordance=concordance,
        source_regression=source_reg,
        generated_regression=gen_reg,
        per_replicate_nrmse=per_replicate,
    )

    if not spec.keep_aug_labels and appended:
        generated = [aug.strip_labels(g, appended) for g in generated]

    return PipelineResult(
        spec=spec,
        source=g_source,
        generated=generated,
        generation_reports=reports,
        fidelity=fidelity,
        tune=tune_result,
        source_communities=source_comm,
        replication=replication,
        appended_labels=tuple(appended),
        degree_stage_skipped=degree_skipped,
    )


# --- artifact emission --------------------------------------------------------


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def write_artifacts(result: PipelineResult, outdir, report_format: str = "jsonl") -> list[Path]:
    """Write surrogate tables, reports, and a manifest under ``outdir``.

    All files are byte-deterministic for a given spec and input: no
    timestamps or wall-clock values are serialised.
    """
    from .graph_io import write_property_graph

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    for r, g in enumerate(result.generated):
        suffix = "" if r == 0 else f"_r{r}"
        nodes = outdir / f"nodes{suffix}.csv"
        edges = outdir / f"edges{suffix}.csv"
        write_property_graph(g, nodes, edges, include_passive=False)
        written += [nodes, edges]

    payload = result.fidelity.to_payload()
    payload["generation_reports"] = [rep.to_payload() for rep in result.generation_reports]
    payload["degree_stage_skipped"] = result.degree_stage_skipped
    payload["appended_labels"] = list(result.appended_labels)
    if result.replication is not None:
        payload["replication"] = result.replication.to_payload()
    if result.tune is not None:
        payload["selected_n_b"] = result.tune.selected_n_b
        payload["tune_converged"] = result.tune.converged

    if report_format == "jsonl":
        report_path = outdir / "report.jsonl"
        with open(report_path, "w") as fh:
            fh.write(json.dumps(payload, sort_keys=True) + "\n")
    elif report_format == "csv":
        import csv as _csv

        report_path = outdir / "report.csv"
        with open(report_path, "w", newline="") as fh:
            writer = _csv.writer(fh, lineterminator="\n")
            writer.writerow(["key", "value"])
            for key, value in sorted(_flatten(payload).items()):
                writer.writerow([key, value])
    else:
        raise InputError(f"unknown report format {report_format!r}")
    written.append(report_path)

    ccdf_path = outdir / "ccdf.csv"
    from .metrics import write_ccdf_csv

    write_ccdf_csv(result.fidelity.source_ccdf, result.fidelity.generated_ccdf, ccdf_path)
    written.append(ccdf_path)

    if result.tune is not None:
        tune_path = outdir / "tune.csv"
        aug.write_tune_csv(result.tune, tune_path)
        written.append(tune_path)

    manifest = {
        "files": [
            {"name": p.name, "sha256": _sha256(p), "bytes": p.stat().st_size}
            for p in sorted(written, key=lambda p: p.name)
        ]
    }
    manifest_path = outdir / "manifest.json"
    with open(manifest_path, "w") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
        fh.write("\n")
    written.append(manifest_path)
    return written


def _flatten(obj, prefix: str = "") -> dict[str, str]:
    flat: dict[str, str] = {}
    if isinstance(obj, dict):
        for k, v in obj.items():
            flat.update(_flatten(v, f"{prefix}{k}." if prefix else f"{k}."))
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            flat.update(_flatten(v, f"{prefix}{i}."))
    else:
        flat[prefix[:-1]] = json.dumps(obj)
    return flat

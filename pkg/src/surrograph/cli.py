"""Command-line front end for producing shareable surrogate graphs.

Subcommands: ``generate`` (full pipeline plus artifacts), ``tune``
(degree-bin grid search only), ``compare`` (fidelity report between two
graphs), ``communities`` (detection dump), and ``validate-regression``
(homophily odds-ratio replication).

Exit status contract: 0 success, 1 bad input (message on stderr), 2
statistical non-convergence (tuning tolerance unmet, regression
separation) with partial outputs written and flagged. Seeds are mandatory
wherever randomness is involved; rerunning any subcommand with identical
inputs and flags produces byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import augment as aug
from .errors import InputError, NonConvergenceError
from .graph_io import read_config, read_property_graph
from .community import linchpin_centrality, write_communities_csv
from .metrics import (
    compare_communities,
    degree_ccdf,
    fit_homophily_regression,
    homophily_proportion,
    nrmse,
    write_ccdf_csv,
)
from .pipeline import (
    PipelineSpec,
    detect_communities,
    run_pipeline,
    write_artifacts,
)

__all__ = ["main", "build_parser"]

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; our contract reserves 2 for
    non-convergence, so usage errors are remapped to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def _csv_ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x != "")


def _csv_floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x != "")


def _add_io_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nodes", required=True, help="nodes CSV (node_id + columns)")
    p.add_argument("--edges", required=True, help="edges CSV (src,dst)")
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--out", required=True, help="output directory")


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n-vertices", type=int, default=None, help="target |V| (default: source)")
    p.add_argument("--n-edges", type=int, default=None, help="target |E| (default: source)")
    p.add_argument(
        "--community-algo",
        choices=["edge-betweenness", "fast-greedy", "none"],
        default=None,
    )
    p.add_argument(
        "--linchpin-bins",
        type=_csv_floats,
        default=None,
        help="centrality cut points, e.g. 0,0.2 (omit to disable)",
    )
    p.add_argument("--grid", type=_csv_ints, default=None, help="degree-bin counts, e.g. 3,5,7,10,15")
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--seeds-per-eval", type=int, default=None)
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--keep-aug-labels", action="store_true", default=None)
    p.add_argument("--report", choices=["csv", "jsonl"], default=None)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument(
        "--allocation", choices=["deterministic", "multinomial"], default=None
    )
    p.add_argument("--retry-budget", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="surrograph", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="run the full pipeline and write surrogates")
    _add_io_flags(p_gen)
    p_gen.add_argument("--seed", type=int, required=True)
    _add_pipeline_flags(p_gen)

    p_tune = sub.add_parser("tune", help="evaluate the degree-bin grid only")
    _add_io_flags(p_tune)
    p_tune.add_argument("--seed", type=int, required=True)
    _add_pipeline_flags(p_tune)
    p_tune.add_argument(
        "--stop-at-tolerance",
        action="store_true",
        help="stop at the first grid value meeting the tolerance",
    )

    p_cmp = sub.add_parser("compare", help="fidelity report between two graphs")
    p_cmp.add_argument("--source-nodes", required=True)
    p_cmp.add_argument("--source-edges", required=True)
    p_cmp.add_argument("--target-nodes", required=True)
    p_cmp.add_argument("--target-edges", required=True)
    p_cmp.add_argument("--out", required=True)
    p_cmp.add_argument(
        "--community-algo",
        choices=["edge-betweenness", "fast-greedy", "none"],
        default="fast-greedy",
    )
    p_cmp.add_argument("--report", choices=["csv", "jsonl"], default="jsonl")

    p_comm = sub.add_parser("communities", help="detect and dump communities")
    p_comm.add_argument("--nodes", required=True)
    p_comm.add_argument("--edges", required=True)
    p_comm.add_argument("--out", required=True)
    p_comm.add_argument(
        "--community-algo",
        choices=["edge-betweenness", "fast-greedy"],
        default="fast-greedy",
    )

    p_reg = sub.add_parser(
        "validate-regression",
        help="replicate the homophily odds ratio on surrogates",
    )
    _add_io_flags(p_reg)
    p_reg.add_argument("--seed", type=int, required=True)
    _add_pipeline_flags(p_reg)
    p_reg.add_argument("--attribute", required=True, help="label column, e.g. label_specialty")
    p_reg.add_argument(
        "--target-values",
        required=True,
        help="comma-separated outcome values, e.g. hospitalist,internal",
    )

    return parser


_PIPELINE_DEFAULTS = {
    "n_t": None,
    "m_t": None,
    "community_algo": "fast-greedy",
    "centrality_bins": None,
    "grid": (),
    "tolerance": None,
    "seeds_per_eval": 3,
    "allocation": "deterministic",
    "retry_budget": 100,
    "replicates": 1,
    "keep_aug_labels": False,
    "report": "jsonl",
    "jobs": 1,
}

_FLAG_TO_CONFIG = {
    "n_t": "n_vertices",
    "m_t": "n_edges",
    "community_algo": "community_algo",
    "centrality_bins": "linchpin_bins",
    "grid": "grid",
    "tolerance": "tolerance",
    "seeds_per_eval": "seeds_per_eval",
    "allocation": "allocation",
    "retry_budget": "retry_budget",
    "replicates": "replicates",
    "keep_aug_labels": "keep_aug_labels",
    "report": "report",
    "jobs": "jobs",
}

_CONFIG_KEY = {
    "n_t": "n_t",
    "m_t": "m_t",
    "community_algo": "community_algo",
    "centrality_bins": "centrality_bins",
    "grid": "grid",
    "tolerance": "tolerance",
    "seeds_per_eval": "seeds_per_eval",
    "allocation": "allocation",
    "retry_budget": "retry_budget",
    "replicates": "replicates",
    "keep_aug_labels": "keep_aug_labels",
    "report": "report",
    "jobs": "jobs",
}


def _merged_settings(args: argparse.Namespace) -> dict:
    """Defaults < config file < explicit flags."""
    settings = dict(_PIPELINE_DEFAULTS)
    if getattr(args, "config", None):
        file_values = read_config(args.config)
        for key in settings:
            ckey = _CONFIG_KEY[key]
            if ckey in file_values:
                settings[key] = file_values[ckey]
    for key, flag in _FLAG_TO_CONFIG.items():
        value = getattr(args, flag, None)
        if value is not None:
            settings[key] = value
    return settings


def _build_spec(args: argparse.Namespace) -> PipelineSpec:
    s = _merged_settings(args)
    return PipelineSpec(
        seed=args.seed,
        n_t=s["n_t"],
        m_t=s["m_t"],
        community_algo=s["community_algo"],
        centrality_bins=tuple(s["centrality_bins"]) if s["centrality_bins"] else None,
        grid=tuple(s["grid"]),
        tolerance=s["tolerance"],
        seeds_per_eval=s["seeds_per_eval"],
        stop_at_tolerance=getattr(args, "stop_at_tolerance", False),
        allocation_mode=s["allocation"],
        retry_budget=s["retry_budget"],
        replicates=s["replicates"],
        keep_aug_labels=bool(s["keep_aug_labels"]),
        regression_attribute=getattr(args, "attribute", None),
        regression_targets=(
            tuple(getattr(args, "target_values").split(","))
            if getattr(args, "target_values", None)
            else ()
        ),
        jobs=s["jobs"],
    )


def _cmd_generate(args) -> int:
    spec = _build_spec(args)
    g = read_property_graph(args.nodes, args.edges)
    result = run_pipeline(g, spec)
    write_artifacts(result, args.out, _merged_settings(args)["report"])
    if result.tune is not None and not result.tune.converged:
        print("tuning tolerance unmet; outputs flagged", file=sys.stderr)
        return 2
    return 0


def _cmd_tune(args) -> int:
    spec = _build_spec(args)
    g = read_property_graph(args.nodes, args.edges)
    g_aug = g
    if spec.community_algo != "none":
        comm = detect_communities(g, spec.community_algo)
        g_aug = aug.append_community_label(g_aug, comm)
    if spec.centrality_bins is not None:
        scores = linchpin_centrality(g_aug, aug.COMMUNITY_LABEL)
        g_aug = aug.append_centrality_bin_label(g_aug, scores, spec.centrality_bins)
    if not spec.grid:
        raise InputError("tune requires a non-empty --grid")
    result = aug.tune_degree_bins(
        g_aug,
        spec.grid,
        spec.tolerance,
        spec.seeds_per_eval,
        spec.seed,
        retry_budget=spec.retry_budget,
        stop_at_tolerance=spec.stop_at_tolerance,
        jobs=spec.jobs,
        metric=_tune_metric_against(g),
    )
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    aug.write_tune_csv(result, outdir / "tune.csv")
    if not result.converged:
        print(
            f"no grid value met tolerance {spec.tolerance}; "
            f"best n_b={result.selected_n_b} at {result.achieved_error:.6g}",
            file=sys.stderr,
        )
        return 2
    return 0


def _tune_metric_against(source):
    src = degree_ccdf(source)

    def metric(_unused_source, generated):
        return nrmse(src, degree_ccdf(generated))

    return metric


def _cmd_compare(args) -> int:
    g_src = read_property_graph(args.source_nodes, args.source_edges)
    g_tgt = read_property_graph(args.target_nodes, args.target_edges)
    src_ccdf = degree_ccdf(g_src)
    tgt_ccdf = degree_ccdf(g_tgt)
    payload = {
        "nrmse": nrmse(src_ccdf, tgt_ccdf),
        "nrmse_normalizer": "source CCDF range on the union grid",
    }
    if args.community_algo != "none":
        src_comm = detect_communities(g_src, args.community_algo)
        tgt_comm = detect_communities(g_tgt, args.community_algo)
        summary = compare_communities(src_comm, tgt_comm)
        payload.update(
            source_community_count=src_comm.n_communities,
            generated_community_count=tgt_comm.n_communities,
            source_community_sizes=[int(s) for s in src_comm.sizes],
            generated_community_sizes=[int(s) for s in tgt_comm.sizes],
            community_count_difference=summary.count_difference,
            community_size_l1=summary.size_l1,
        )
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    write_ccdf_csv(src_ccdf, tgt_ccdf, outdir / "ccdf.csv")
    if args.report == "jsonl":
        with open(outdir / "report.jsonl", "w") as fh:
            fh.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        import csv as _csv

        with open(outdir / "report.csv", "w", newline="") as fh:
            writer = _csv.writer(fh, lineterminator="\n")
            writer.writerow(["key", "value"])
            for key in sorted(payload):
                writer.writerow([key, json.dumps(payload[key])])
    return 0


def _cmd_communities(args) -> int:
    g = read_property_graph(args.nodes, args.edges)
    assignment = detect_communities(g, args.community_algo)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    write_communities_csv(g, assignment, outdir / "communities.csv")
    return 0


def _cmd_validate_regression(args) -> int:
    spec = _build_spec(args)
    if spec.replicates < 2:
        raise InputError("validate-regression needs --replicates >= 2")
    g = read_property_graph(args.nodes, args.edges)
    sample = homophily_proportion(g, spec.regression_attribute, spec.regression_targets)
    source_fit = fit_homophily_regression(sample.y, sample.x)
    result = run_pipeline(g, spec)

    payload = {
        "attribute": spec.regression_attribute,
        "target_values": list(spec.regression_targets),
        "source": source_fit.to_payload(),
        "replication": result.replication.to_payload() if result.replication else None,
    }
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / "regression.jsonl", "w") as fh:
        fh.write(json.dumps(payload, sort_keys=True) + "\n")

    failed = not source_fit.converged or (
        result.replication is not None and result.replication.excluded_seeds
    )
    if failed:
        print("regression non-convergence; outputs flagged", file=sys.stderr)
        return 2
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "tune": _cmd_tune,
    "compare": _cmd_compare,
    "communities": _cmd_communities,
    "validate-regression": _cmd_validate_regression,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NonConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

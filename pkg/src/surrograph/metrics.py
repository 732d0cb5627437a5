"""Fidelity measurement between a source graph and its surrogates.

Degree structure is compared through the complementary cumulative degree
distribution P(deg >= d), evaluated on the union grid of both graphs and
zero-extended past a graph's maximum degree. The normalised RMSE divides
by the range of the *source* CCDF on that grid (range normalisation; the
normaliser choice is surfaced in the report). Community structure is
compared by count and by the L1 distance between descending size vectors.

The homophily validation fits logit P(y=1) = b0 + b1*x by iteratively
reweighted least squares, where x is the fraction of a vertex's neighbors
sharing its attribute value. Isolated vertices have an undefined
proportion (0/0) and are excluded from the sample. Standard errors come
from the observed information; intervals are Wald on the log-odds scale.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .community import CommunityAssignment
from .errors import InputError
from .graphcore import PropertyGraph

__all__ = [
    "Ccdf",
    "ConcordanceSummary",
    "RegressionResult",
    "HomophilySample",
    "ReplicationResult",
    "FidelityReport",
    "degree_ccdf",
    "nrmse",
    "compare_communities",
    "homophily_proportion",
    "logistic_log_likelihood",
    "logistic_gradient",
    "fit_homophily_regression",
    "replicate_regression",
    "write_ccdf_csv",
]

IRLS_GRADIENT_TOL = 1e-8
IRLS_MAX_ITER = 50
_Z95 = 1.959963984540054  # standard normal 97.5% quantile


@dataclass
class Ccdf:
    """P(deg >= d) on the integer grid d = 0..max_degree."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if len(self.values) == 0:
            raise InputError("CCDF needs at least the d=0 point")
        if abs(self.values[0] - 1.0) > 1e-12:
            raise InputError("CCDF must equal 1 at d=0")
        if np.any(np.diff(self.values) > 1e-12):
            raise InputError("CCDF values must be non-increasing")

    @property
    def max_degree(self) -> int:
        return len(self.values) - 1

    def extended(self, max_d: int) -> np.ndarray:
        """Values on 0..max_d, zero past this graph's maximum degree."""
        if max_d < self.max_degree:
            raise InputError("cannot truncate a CCDF grid")
        out = np.zeros(max_d + 1, dtype=np.float64)
        out[: len(self.values)] = self.values
        return out


def degree_ccdf(g: PropertyGraph) -> Ccdf:
    """Empirical CCDF of vertex degree."""
    if g.n_vertices == 0:
        raise InputError("CCDF is undefined on an empty graph")
    deg = g.degrees()
    counts = np.bincount(deg)
    # survival at d = fraction of vertices with degree >= d
    tail = counts[::-1].cumsum()[::-1]
    return Ccdf(values=tail / g.n_vertices)


def nrmse(source: Ccdf, target: Ccdf) -> float:
    """RMSE between the CCDFs on their union grid, normalised by the
    source CCDF's value range on that grid."""
    max_d = max(source.max_degree, target.max_degree)
    s = source.extended(max_d)
    t = target.extended(max_d)
    norm = float(s.max() - s.min())
    if norm == 0.0:
        raise InputError("source CCDF has zero range; NRMSE undefined")
    rmse = math.sqrt(float(np.mean((s - t) ** 2)))
    return rmse / norm


@dataclass
class ConcordanceSummary:
    """Community-structure agreement between two partitions."""

    count_difference: int
    size_l1: int


def compare_communities(
    source: CommunityAssignment, target: CommunityAssignment
) -> ConcordanceSummary:
    """Absolute count difference and L1 distance between descending size
    vectors (zero-padded to equal length)."""
    a = np.asarray(source.sizes, dtype=np.int64)
    b = np.asarray(target.sizes, dtype=np.int64)
    width = max(len(a), len(b))
    a = np.pad(a, (0, width - len(a)))
    b = np.pad(b, (0, width - len(b)))
    return ConcordanceSummary(
        count_difference=abs(source.n_communities - target.n_communities),
        size_l1=int(np.abs(a - b).sum()),
    )


@dataclass
class HomophilySample:
    """Regression sample: one row per non-isolated vertex."""

    vertex_ids: np.ndarray
    x: np.ndarray  # fraction of neighbors sharing the vertex's value
    y: np.ndarray  # 1 if the vertex's value is in the target set


def homophily_proportion(
    g: PropertyGraph, attribute: str, target_values: Sequence[str]
) -> HomophilySample:
    """Per-vertex homophily predictor and binary outcome.

    ``x(v)`` is the fraction of v's neighbors with the same attribute
    value as v; isolated vertices are excluded. ``y(v)`` indicates
    membership of v's value in ``target_values``.
    """
    pos = g.schema.position_of(attribute)
    target_codes = {
        g.schema.code_of(pos, v)
        for v in target_values
        if v in g.schema.domains[pos]
    }
    attr = g.label_codes[:, pos]
    indptr, nbrs = g.adjacency()
    deg = g.degrees()

    kept = np.flatnonzero(deg > 0)
    x = np.empty(len(kept), dtype=np.float64)
    for i, v in enumerate(kept):
        block = nbrs[indptr[v] : indptr[v + 1]]
        x[i] = np.count_nonzero(attr[block] == attr[v]) / deg[v]
    y = np.array([1 if int(attr[v]) in target_codes else 0 for v in kept], dtype=np.int64)
    return HomophilySample(vertex_ids=kept, x=x, y=y)


def _design(x: np.ndarray) -> np.ndarray:
    return np.column_stack((np.ones(len(x)), x))


def logistic_log_likelihood(beta: np.ndarray, y: np.ndarray, x: np.ndarray) -> float:
    """Bernoulli log-likelihood of the intercept+slope logistic model."""
    eta = _design(x) @ np.asarray(beta, dtype=np.float64)
    # log(1 + e^eta) computed stably on both tails
    log1pexp = np.where(eta > 0, eta + np.log1p(np.exp(-np.abs(eta))), np.log1p(np.exp(eta)))
    return float(np.sum(y * eta - log1pexp))


def logistic_gradient(beta: np.ndarray, y: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Analytic score vector of the log-likelihood."""
    design = _design(x)
    eta = design @ np.asarray(beta, dtype=np.float64)
    p = 1.0 / (1.0 + np.exp(-eta))
    return design.T @ (y - p)


@dataclass
class RegressionResult:
    """Fitted homophily model with Wald inference on the slope."""

    intercept: float
    slope: float
    slope_se: float
    odds_ratio: float
    ci_lower: float
    ci_upper: float
    converged: bool
    iterations: int
    diagnostic: str = ""

    def to_payload(self) -> dict:
        return {
            "intercept": self.intercept,
            "slope": self.slope,
            "slope_se": self.slope_se,
            "odds_ratio": self.odds_ratio,
            "ci_lower": self.ci_lower,
            "ci_upper": self.ci_upper,
            "converged": self.converged,
            "iterations": self.iterations,
            "diagnostic": self.diagnostic,
        }


def fit_homophily_regression(y, x) -> RegressionResult:
    """IRLS fit of logit P(y=1) = b0 + b1*x.

    Converged means the score's max-norm fell below 1e-8 within 50
    iterations; separation (diverging coefficients) is flagged as
    non-converged with a diagnostic rather than raised.
    """
    y = np.asarray(y, dtype=np.float64).ravel()
    x = np.asarray(x, dtype=np.float64).ravel()
    if len(y) != len(x):
        raise InputError("y and x differ in length")
    if len(y) < 2:
        raise InputError("need at least 2 observations")
    if float(x.max() - x.min()) == 0.0:
        raise InputError("predictor is constant; slope unidentifiable")
    if set(np.unique(y)) - {0.0, 1.0}:
        raise InputError("outcome must be binary 0/1")

    design = _design(x)
    beta = np.zeros(2)
    converged = False
    diagnostic = ""
    iterations = 0
    for iterations in range(1, IRLS_MAX_ITER + 1):
        eta = design @ beta
        p = 1.0 / (1.0 + np.exp(-np.clip(eta, -700, 700)))
        w = p * (1.0 - p)
        grad = design.T @ (y - p)
        if float(np.abs(grad).max()) <= IRLS_GRADIENT_TOL:
            converged = True
            break
        hess = design.T @ (design * w[:, None])
        try:
            step = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            diagnostic = "singular information matrix (possible separation)"
            break
        beta = beta + step
        if float(np.abs(beta).max()) > 1e3:
            diagnostic = "coefficients diverging (perfect separation suspected)"
            break

    if not converged and not diagnostic:
        diagnostic = f"gradient tolerance unmet after {IRLS_MAX_ITER} iterations"

    eta = design @ beta
    p = 1.0 / (1.0 + np.exp(-np.clip(eta, -700, 700)))
    w = p * (1.0 - p)
    hess = design.T @ (design * w[:, None])
    try:
        cov = np.linalg.inv(hess)
        slope_se = float(math.sqrt(max(cov[1, 1], 0.0)))
    except np.linalg.LinAlgError:
        slope_se = float("nan")

    slope = float(beta[1])
    return RegressionResult(
        intercept=float(beta[0]),
        slope=slope,
        slope_se=slope_se,
        odds_ratio=math.exp(slope),
        ci_lower=math.exp(slope - _Z95 * slope_se) if math.isfinite(slope_se) else float("nan"),
        ci_upper=math.exp(slope + _Z95 * slope_se) if math.isfinite(slope_se) else float("nan"),
        converged=converged,
        iterations=iterations,
        diagnostic=diagnostic,
    )


@dataclass
class ReplicationResult:
    """Odds-ratio replication across surrogate graphs."""

    seeds: list[int]
    results: list[RegressionResult]
    mean_odds_ratio: float
    sd_odds_ratio: float
    excluded_seeds: list[int] = field(default_factory=list)

    def to_payload(self) -> dict:
        return {
            "seeds": self.seeds,
            "mean_odds_ratio": self.mean_odds_ratio,
            "sd_odds_ratio": self.sd_odds_ratio,
            "excluded_seeds": self.excluded_seeds,
            "replicates": [r.to_payload() for r in self.results],
        }


def replicate_regression(
    generate: Callable[[int], PropertyGraph],
    attribute: str,
    target_values: Sequence[str],
    n_replicates: int,
    base_seed: int,
) -> ReplicationResult:
    """Fit the homophily regression on ``n_replicates`` surrogates.

    Surrogates are produced by ``generate(seed)`` for seeds
    ``base_seed..base_seed+n-1``; non-convergent fits are excluded from
    the mean/sd and recorded.
    """
    if n_replicates < 2:
        raise InputError("need at least 2 replicates")
    seeds = list(range(base_seed, base_seed + n_replicates))
    results: list[RegressionResult] = []
    excluded: list[int] = []
    kept_ors: list[float] = []
    for seed in seeds:
        g = generate(seed)
        sample = homophily_proportion(g, attribute, target_values)
        fit = fit_homophily_regression(sample.y, sample.x)
        results.append(fit)
        if fit.converged:
            kept_ors.append(fit.odds_ratio)
        else:
            excluded.append(seed)
    if not kept_ors:
        raise InputError("no replicate regression converged")
    mean = float(np.mean(kept_ors))
    sd = float(np.std(kept_ors, ddof=1)) if len(kept_ors) > 1 else 0.0
    return ReplicationResult(
        seeds=seeds,
        results=results,
        mean_odds_ratio=mean,
        sd_odds_ratio=sd,
        excluded_seeds=excluded,
    )


@dataclass
class FidelityReport:
    """Everything needed to certify a surrogate against its source."""

    source_ccdf: Ccdf
    generated_ccdf: Ccdf
    nrmse: float
    nrmse_normalizer: str = "source CCDF range on the union grid"
    source_communities: CommunityAssignment | None = None
    generated_communities: CommunityAssignment | None = None
    concordance: ConcordanceSummary | None = None
    source_regression: RegressionResult | None = None
    generated_regression: RegressionResult | None = None
    per_replicate_nrmse: list[float] = field(default_factory=list)

    def __post_init__(self):
        if self.nrmse < 0:
            raise InputError("NRMSE must be non-negative")

    def to_payload(self) -> dict:
        payload: dict = {
            "nrmse": self.nrmse,
            "nrmse_normalizer": self.nrmse_normalizer,
            "per_replicate_nrmse": self.per_replicate_nrmse,
        }
        if self.source_communities is not None:
            payload["source_community_count"] = self.source_communities.n_communities
            payload["source_community_sizes"] = [
                int(s) for s in self.source_communities.sizes
            ]
        if self.generated_communities is not None:
            payload["generated_community_count"] = (
                self.generated_communities.n_communities
            )
            payload["generated_community_sizes"] = [
                int(s) for s in self.generated_communities.sizes
            ]
        if self.concordance is not None:
            payload["community_count_difference"] = self.concordance.count_difference
            payload["community_size_l1"] = self.concordance.size_l1
        if self.source_regression is not None:
            payload["source_regression"] = self.source_regression.to_payload()
        if self.generated_regression is not None:
            payload["generated_regression"] = self.generated_regression.to_payload()
        return payload

    def to_jsonl(self) -> str:
        return json.dumps(self.to_payload(), sort_keys=True)


def write_ccdf_csv(source: Ccdf, generated: Ccdf, path) -> None:
    """Plot-ready union-grid CCDF table: d, source value, generated value."""
    max_d = max(source.max_degree, generated.max_degree)
    s = source.extended(max_d)
    t = generated.extended(max_d)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["d", "ccdf_source", "ccdf_generated"])
        for d in range(max_d + 1):
            writer.writerow([d, repr(float(s[d])), repr(float(t[d]))])

"""Surrogate property-graph synthesis and fidelity certification.

Generates release-safe stand-ins for confidential graphs: the joint
vertex-attribute distribution and the attribute-pair edge distribution are
preserved by construction, and degree and community structure are carried
through structural label augmentation. A metrics stack (degree-CCDF NRMSE,
community concordance, homophily-regression replication) certifies each
surrogate against its source.
"""

from ._kernels import ACTIVE_BACKEND
from .augment import (
    BinSpec,
    TuneResult,
    append_centrality_bin_label,
    append_community_label,
    append_degree_bin_label,
    strip_labels,
    tune_degree_bins,
)
from .community import (
    CommunityAssignment,
    edge_betweenness_communities,
    greedy_modularity_communities,
    linchpin_centrality,
    modularity,
)
from .errors import InputError, NonConvergenceError, SurrographError
from .generator import (
    CategoryToVertexMap,
    GenerationConfig,
    GenerationReport,
    allocate_vertices,
    build_category_to_vertex_map,
    generate_graph,
    sample_edges,
)
from .graphcore import (
    LabelSchema,
    PropertyGraph,
    closeness_centrality,
    degree_sequence,
    ego_union_subgraph,
)
from .graph_io import (
    load_graph_bundle,
    read_config,
    read_property_graph,
    write_property_graph,
)
from .labels import (
    EdgeCategoryDistribution,
    JointCategoryIndex,
    VertexCategoryDistribution,
    enumerate_joint_categories,
    estimate_edge_category_distribution,
    estimate_vertex_category_distribution,
)
from .metrics import (
    Ccdf,
    FidelityReport,
    RegressionResult,
    compare_communities,
    degree_ccdf,
    fit_homophily_regression,
    homophily_proportion,
    nrmse,
    replicate_regression,
)
from .pipeline import PipelineResult, PipelineSpec, run_pipeline, write_artifacts

__version__ = "0.1.0"

__all__ = [
    "ACTIVE_BACKEND",
    "BinSpec",
    "Ccdf",
    "CategoryToVertexMap",
    "CommunityAssignment",
    "EdgeCategoryDistribution",
    "FidelityReport",
    "GenerationConfig",
    "GenerationReport",
    "InputError",
    "JointCategoryIndex",
    "LabelSchema",
    "NonConvergenceError",
    "PipelineResult",
    "PipelineSpec",
    "PropertyGraph",
    "RegressionResult",
    "SurrographError",
    "TuneResult",
    "VertexCategoryDistribution",
    "allocate_vertices",
    "append_centrality_bin_label",
    "append_community_label",
    "append_degree_bin_label",
    "build_category_to_vertex_map",
    "closeness_centrality",
    "compare_communities",
    "degree_ccdf",
    "degree_sequence",
    "edge_betweenness_communities",
    "ego_union_subgraph",
    "enumerate_joint_categories",
    "estimate_edge_category_distribution",
    "estimate_vertex_category_distribution",
    "fit_homophily_regression",
    "generate_graph",
    "greedy_modularity_communities",
    "homophily_proportion",
    "linchpin_centrality",
    "modularity",
    "nrmse",
    "read_config",
    "read_property_graph",
    "replicate_regression",
    "run_pipeline",
    "sample_edges",
    "strip_labels",
    "tune_degree_bins",
    "write_artifacts",
    "write_property_graph",
    "load_graph_bundle",
]

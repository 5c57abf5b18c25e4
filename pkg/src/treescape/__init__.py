"""Induced tree embedding in sparse expanding graphs.

The package grows bounded-degree trees inside a host graph so that the
finished tree is an induced subgraph, playing an online game against an
adversary that picks extension order.  Supporting machinery: escape-way
overlays, distance-2 bootstrap percolation, randomized reservation with
clash resolution, host preprocessing pipelines, and brute-force oracles
for desk-scale verification.
"""

from .graph import (
    Graph,
    GraphError,
    build_graph,
    compact_subgraph,
    connected_components,
    degeneracy_ordering,
    density_audit,
    is_spanning_subgraph,
    masked_subgraph,
    read_edge_list,
    write_edge_list,
)
from .escapeway import (
    ArcSet,
    EscapeWay,
    EscapeWayError,
    InDegreeViolation,
    BiOrientedEdge,
    InducednessViolation,
    NotCompatible,
    OrientationClass,
    agrees,
    available_neighbors,
    available_neighbors_in,
    classify_orientation,
    closure_K,
    union_escape_ways,
    validate_escape_way,
)
from .critical import (
    CriticalState,
    assert_available_bound,
    critical_set,
    density_witness,
    extend_critical,
)
from .reservation import (
    DegeneracyCapExceeded,
    ReservationOutcome,
    ReservationParams,
    TargetUnreachable,
    reserve,
)
from .trees import (
    TreeSpec,
    TreeSpecError,
    path_tree,
    random_bounded_tree,
    star_tree,
    tree_family,
    tree_from_edges,
)
from .adversaries import (
    Adversary,
    AdversaryError,
    Extend,
    Rollback,
    ScriptedAdversary,
    TreeDrivenAdversary,
    make_adversary,
)
from .embedder import (
    CascadeTooLarge,
    EmbedError,
    EmbedState,
    GameConfig,
    GameResult,
    HypothesisRefused,
    InducednessCertificate,
    InvalidRequest,
    NoAvailableExtension,
    ReservationFailed,
    paper_hypothesis_violations,
    run_game,
    start_game,
)
from .experiments import (
    ColoringPolicy,
    GnpParams,
    NoQualifyingClass,
    PipelineEmptied,
    RamseyHostParams,
    color_and_extract,
    counterexample,
    dodecahedron,
    gnp,
    preprocess_random,
    ramsey_host,
    random_regular,
)
from .oracle import (
    BudgetExhausted,
    CheegerEstimate,
    Embedding,
    OracleBudget,
    brute_force_induced_embed,
    cheeger_small,
    enumerate_escape_ways,
)
from .reports import ExperimentReport, TrialRecord, clopper_pearson, dot_export

__version__ = "0.1.0"

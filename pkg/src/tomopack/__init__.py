"""tomopack: numerical design of near-optimal measurement quorums for
quantum state tomography via Grassmannian packings of projector subspaces."""

__version__ = "0.1.0"

from .hilbert import (
    Quorum,
    chart_length,
    embed_orthonormal_triple,
    projector_from_vectors,
    quorum_from_chart,
    traceless_part,
    vector_from_angles,
)
from .metrics import (
    MetricsReport,
    chordal_distance_sq,
    evaluate_quorum,
    extend_to_maximal,
    gram_matrix,
    non_orthogonality,
    orthoplex_report,
    quality_measure,
    repetition_overhead,
    upper_bound,
)
from .powell import PowellConfig, PowellResult, line_minimize, powell_minimize
from .schedule import (
    ObjectiveSpec,
    ScheduleConfig,
    TraceRecord,
    alternating_optimize,
    make_objective,
    multi_restart,
    random_chart,
)
from .reference import (
    bundled_chart_n6,
    halfdim_optimal_quorum_n4,
    mub_family,
    rank1_optimal_quorum_n2,
)

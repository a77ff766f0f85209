"""Random Apollonian networks: growth, exact longest paths, occupancy laws.

An instance starts as a triangle and grows by repeatedly picking a
uniformly random triangular face and planting a new vertex inside it,
joined to the face's three corners.  This package generates such
instances reproducibly, solves their longest-path problem exactly by
dynamic programming over the face tree (with a brute-force oracle and a
fast heuristic alongside), evaluates the exact law of how many
insertions land inside a marked set of faces, and provides the
round-decomposition experiment harness plus the analytic scales it
runs on.  The ``apollonia`` command line exposes all of it.
"""

from .errors import CapacityError, DomainError
from .rng import SplitMix64, derive, mix64
from .ran import (
    Ran,
    TriangleNode,
    adjacency,
    deserialize,
    extend,
    face_subinstance,
    from_choices,
    generate,
    prefix,
    project_path,
    projection_face_bounds,
    serialize,
    subinstance_from_insertions,
    visited_faces,
)
from .longest_path import (
    heuristic_long_path,
    longest_path_bruteforce,
    longest_path_exact,
    validate_path,
)
from .occupancy import (
    BranchingParams,
    OccupancyLaw,
    ViolationReport,
    branching_coeff_exact,
    count_tail_violations,
    death_count_distribution,
    death_count_pmf,
    log_branching_coeff,
    occupancy_pmf,
    occupancy_pmf_exact,
    sample_occupancy,
    tail_threshold,
)
from .analysis import (
    AnalysisParams,
    RoundReport,
    RoundRow,
    RoundSchedule,
    derived_scales,
    exp_square,
    inverse_failure_rate,
    log_power,
    reference_bounds,
    richness_cutoff,
    round_decomposition_experiment,
    round_schedule,
    round_trial,
    scaling_trial,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisParams",
    "BranchingParams",
    "CapacityError",
    "DomainError",
    "OccupancyLaw",
    "Ran",
    "RoundReport",
    "RoundRow",
    "RoundSchedule",
    "SplitMix64",
    "TriangleNode",
    "ViolationReport",
    "__version__",
    "adjacency",
    "branching_coeff_exact",
    "count_tail_violations",
    "death_count_distribution",
    "death_count_pmf",
    "derive",
    "derived_scales",
    "deserialize",
    "exp_square",
    "extend",
    "face_subinstance",
    "from_choices",
    "generate",
    "heuristic_long_path",
    "inverse_failure_rate",
    "log_branching_coeff",
    "log_power",
    "longest_path_bruteforce",
    "longest_path_exact",
    "mix64",
    "occupancy_pmf",
    "occupancy_pmf_exact",
    "prefix",
    "project_path",
    "projection_face_bounds",
    "reference_bounds",
    "richness_cutoff",
    "round_decomposition_experiment",
    "round_schedule",
    "round_trial",
    "sample_occupancy",
    "scaling_trial",
    "serialize",
    "subinstance_from_insertions",
    "tail_threshold",
    "validate_path",
    "visited_faces",
]

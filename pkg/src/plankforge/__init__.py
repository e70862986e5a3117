"""plankforge: translative slab coverings and polynomial-controlling tables.

The package constructs coverings of balls and box regions by translates of
given slabs (greedy half-width exhaustion, block-partitioned region tiling,
and ordered simplex ladders for moment-curve normals), verifies every claim
on independent samples, and applies the machinery to synthesize sequences
``(x_i, y_i)`` such that every low-degree polynomial passes within 1 of some
pair on a certified coefficient ball.
"""
__version__ = "0.1.0"

from .control import (
    ControlTable,
    DivergenceReport,
    build_control,
    control_check,
    divergence_test,
)
from .errors import (
    CertificateError,
    CoverageError,
    PlankforgeError,
    SlabSupplyError,
)
from .geom import (
    Ball,
    Box,
    Covering,
    PointCloud,
    Slab,
    as_direction,
    rescale_width,
    sample_cloud,
    scale_translate,
    slab_contains,
    unit,
)
from .greedy import (
    GreedyConfig,
    GreedyStep,
    GreedyTrace,
    candidate_offsets,
    cover_ball,
    greedy_step,
    residual_fraction,
)
from .moment import (
    Basis,
    ConditionReport,
    MomentSystem,
    basis_u,
    check_condition_i,
    check_condition_ii,
    moment_matrix,
    moment_vector,
    slabs_from_xs,
)
from .region import (
    BlockPartition,
    RegionCoverResult,
    RegionPlan,
    cover_region,
    filter_wide,
    limsup_diagnostic,
    plan_centers,
    split_blocks,
)
from .simplex import (
    CoverConstant,
    SimplexState,
    StepCertificate,
    chebyshev_center,
    cover_simplex,
    place_first,
    place_next,
    sample_simplex,
    scale_basis,
    scan_state_coverage,
)
from .verify import (
    NecessityReport,
    VerificationReport,
    bang_necessity,
    find_uncovered_point,
    verify_covering,
)

__all__ = [
    "__version__",
    "Ball",
    "Basis",
    "BlockPartition",
    "Box",
    "CertificateError",
    "ConditionReport",
    "ControlTable",
    "CoverConstant",
    "CoverageError",
    "Covering",
    "DivergenceReport",
    "GreedyConfig",
    "GreedyStep",
    "GreedyTrace",
    "MomentSystem",
    "NecessityReport",
    "PlankforgeError",
    "PointCloud",
    "RegionCoverResult",
    "RegionPlan",
    "SimplexState",
    "Slab",
    "SlabSupplyError",
    "StepCertificate",
    "VerificationReport",
    "as_direction",
    "bang_necessity",
    "basis_u",
    "build_control",
    "candidate_offsets",
    "chebyshev_center",
    "check_condition_i",
    "check_condition_ii",
    "control_check",
    "cover_ball",
    "cover_region",
    "cover_simplex",
    "divergence_test",
    "filter_wide",
    "find_uncovered_point",
    "greedy_step",
    "limsup_diagnostic",
    "moment_matrix",
    "moment_vector",
    "place_first",
    "place_next",
    "plan_centers",
    "rescale_width",
    "residual_fraction",
    "sample_cloud",
    "sample_simplex",
    "scale_basis",
    "scale_translate",
    "scan_state_coverage",
    "slab_contains",
    "slabs_from_xs",
    "split_blocks",
    "unit",
    "verify_covering",
]

"""Group-invariant coorbit embeddings with bi-Lipschitz diagnostics.

Build a finite orthogonal group action, embed vectors through sorted orbit
measurements, measure orbit distances, bound the embedding's distortion, and
reduce its dimension with seeded generic linear maps.
"""

from .coorbit import (
    CoorbitConfig,
    CoorbitValue,
    coorbit_column,
    coorbit_value,
    embed,
    embed_batch,
    full_selector,
    gap,
    gap_table,
    global_gap,
    level_set,
    max_selector,
    sort_desc,
    top_k_selector,
)
from .diagnostics import InvariantResult, run_invariant_suite
from .estimators import CoorbitEmbedding, ProjectedCoorbitEmbedding
from .exceptions import (
    AllPairsEquivalent,
    ClosureExceedsCap,
    ConfigError,
    CoorbitError,
    DegenerateDimension,
    DimensionMismatch,
    DimensionTooLarge,
    EnumerationTooLarge,
    GenericityFailure,
    KernelIntersectsFamily,
    NonOrthogonalGenerator,
    UsageError,
    WindowIndexOutOfRange,
)
from .groups import (
    FiniteGroupAction,
    GroupSpec,
    OrbitSet,
    build_group,
    orbit,
    separation_radius,
    stabilizer,
)
from .lipschitz import (
    LipschitzReport,
    SamplingPlan,
    estimate_lower_bound,
    upper_bound_exact,
    upper_bound_relaxed,
)
from .metric import AlignmentResult, is_equivalent, quotient_distance, quotient_distance_batch
from .projection import (
    ProjectionMap,
    SeparationReport,
    SubspaceFamily,
    build_difference_ranges,
    check_injectivity,
    harvest_assignments,
    project_embed,
    project_embed_batch,
    random_projection,
    subspace_lower_bound,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentResult",
    "AllPairsEquivalent",
    "ClosureExceedsCap",
    "ConfigError",
    "CoorbitConfig",
    "CoorbitEmbedding",
    "CoorbitError",
    "CoorbitValue",
    "DegenerateDimension",
    "DimensionMismatch",
    "DimensionTooLarge",
    "EnumerationTooLarge",
    "FiniteGroupAction",
    "GenericityFailure",
    "GroupSpec",
    "InvariantResult",
    "KernelIntersectsFamily",
    "LipschitzReport",
    "NonOrthogonalGenerator",
    "OrbitSet",
    "ProjectedCoorbitEmbedding",
    "ProjectionMap",
    "SamplingPlan",
    "SeparationReport",
    "SubspaceFamily",
    "UsageError",
    "WindowIndexOutOfRange",
    "build_difference_ranges",
    "build_group",
    "check_injectivity",
    "coorbit_column",
    "coorbit_value",
    "embed",
    "embed_batch",
    "estimate_lower_bound",
    "full_selector",
    "gap",
    "gap_table",
    "global_gap",
    "harvest_assignments",
    "is_equivalent",
    "level_set",
    "max_selector",
    "orbit",
    "project_embed",
    "project_embed_batch",
    "quotient_distance",
    "quotient_distance_batch",
    "random_projection",
    "run_invariant_suite",
    "separation_radius",
    "sort_desc",
    "stabilizer",
    "subspace_lower_bound",
    "top_k_selector",
    "upper_bound_exact",
    "upper_bound_relaxed",
]

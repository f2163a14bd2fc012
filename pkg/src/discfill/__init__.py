"""discfill: optimal filling of simple polygons with overlapping maximal
discs, via a heuristic search over medial-axis pieces, a genetic baseline,
and closed-form large-N density predictions."""

from .coverage import (
    FillingSolution,
    OverlapReport,
    Placement,
    contributions,
    lens_area,
    neighbors,
    phi,
    region_area,
    union_area,
    unique_area,
    unique_area_full,
)
from .continuum import (
    AllocationPlan,
    allocate,
    branch_constant,
    branch_models,
    constant_curvature_constant,
    count_ways,
    density_profile,
    predicted_phi,
    predicted_uncovered,
    triangle_cot_fractions,
    two_disc_gap,
)
from .genetic import GAConfig, enforce_maximal, ga_way, next_generation, run_ga
from .geometry import (
    Disc,
    Feature,
    GeometryError,
    Polygon,
    disc_inside,
    distance_to_boundary,
    polygon_area,
)
from .heuristic import (
    FillRun,
    HAConfig,
    fill_exhaustive,
    fill_sequence,
    neighborhood_ways,
    way_search_count,
)
from .local_opt import (
    AscentConfig,
    enumerate_local_maxima,
    local_maximum,
    partition_parts,
    validate_way,
)
from .medial_axis import (
    Branch,
    JunctionPoint,
    MedialAxis,
    Piece,
    compute_medial_axis,
    decompose_pieces,
    radius_at,
)

__version__ = "0.1.0"

"""Random k-dimensional simplicial complexes: Z/2 cohomology, hypergraph
connectivity and hitting times of the growth process."""

from rcsim.errors import CapacityError, ConfigError, InvalidInputError
from rcsim.complex import (
    GrowthOrder,
    SimplicialComplexK,
    boundary_faces,
    face_rank,
    face_unrank,
    link,
    sample_growth_order,
    sample_ynp,
)
from rcsim.gf2 import BitMatrix, ColumnBasis, in_row_space, insert_column, rank
from rcsim.cohomology import (
    BettiResult,
    betti_top,
    incidence_matrix,
    is_coboundary,
    is_cocycle,
    rank_complete_lower,
)
from rcsim.connectivity import (
    ComponentProfile,
    components,
    is_hypergraph_connected,
    isolated_count,
)
from rcsim.process import HittingTimes, coincidence_flags, run_hitting_times

__all__ = [
    "BettiResult",
    "BitMatrix",
    "CapacityError",
    "ColumnBasis",
    "ComponentProfile",
    "ConfigError",
    "GrowthOrder",
    "HittingTimes",
    "InvalidInputError",
    "SimplicialComplexK",
    "betti_top",
    "boundary_faces",
    "coincidence_flags",
    "components",
    "face_rank",
    "face_unrank",
    "in_row_space",
    "incidence_matrix",
    "insert_column",
    "is_coboundary",
    "is_cocycle",
    "is_hypergraph_connected",
    "isolated_count",
    "link",
    "rank",
    "rank_complete_lower",
    "run_hitting_times",
    "sample_growth_order",
    "sample_ynp",
]

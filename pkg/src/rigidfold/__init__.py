"""Rigid foldability, forcing sets and folded states of single-vertex origami."""

from .core import (
    FULL_TURN,
    HALF_TURN,
    MV,
    CreasePattern,
    MVAssignment,
    ccw_angle,
    normalize_pattern,
    sector_angles,
)
from .errors import *  # noqa: F401,F403
from .foldability import (
    BirdsFootWitness,
    PopCapability,
    WitnessKind,
    brute_force_foldable,
    find_cross,
    find_tripod,
    has_birds_foot,
    in_closed_semicircle,
    is_rigidly_foldable_assigned,
    is_rigidly_foldable_unassigned,
    pop_capability,
)
from .forcing import (
    ForcingReport,
    enumerate_foldable_assignments,
    forcing_census,
    is_forcing,
    minimal_forcing_set,
    theorem2_bounds,
    theorem2_check,
)

__version__ = "0.1.0"

"""Central charges, regions, wall equations and good paths."""

from flopdt.charges.central import (
    DEFAULT_Z,
    CentralCharge,
    RegionSpec,
    evaluate,
    heart_classes_in_upper_half_plane,
    in_region,
    origin_value,
    phase,
    support_constant,
    support_ratio,
    support_ratios,
    wall_set,
)
from flopdt.charges.exact import ExactComplex, compare_args, positively_aligned
from flopdt.charges.paths import (
    PATH_FAMILIES,
    ChargePath,
    Crossing,
    CrossingCensus,
    PathSpec,
    census,
    is_good_path,
    solve_wall_time,
)

__all__ = [
    "DEFAULT_Z",
    "PATH_FAMILIES",
    "CentralCharge",
    "ChargePath",
    "Crossing",
    "CrossingCensus",
    "ExactComplex",
    "PathSpec",
    "RegionSpec",
    "census",
    "compare_args",
    "evaluate",
    "heart_classes_in_upper_half_plane",
    "in_region",
    "is_good_path",
    "origin_value",
    "phase",
    "positively_aligned",
    "solve_wall_time",
    "support_constant",
    "support_ratio",
    "support_ratios",
    "wall_set",
]

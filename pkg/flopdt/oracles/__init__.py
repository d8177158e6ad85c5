"""Independent ground truth: partition enumerators and closed-form N-values."""

from flopdt.oracles.plane import count_plane_partitions, plane_partition_table
from flopdt.oracles.providers import (
    ConifoldNProvider,
    HattedNProvider,
    NProvider,
    TableNProvider,
    conifold_N,
    point_N,
    provider_keys,
    random_symmetric_table,
    sigma2,
    symmetric_table,
)
from flopdt.oracles.pyramid import (
    PyramidPartition,
    VariableMap,
    children,
    count_pyramid_partitions,
    enumerate_pyramid_partitions_baseline,
    fit_variable_map,
    parents,
    verify_variable_map,
)

__all__ = [
    "ConifoldNProvider",
    "HattedNProvider",
    "NProvider",
    "PyramidPartition",
    "TableNProvider",
    "VariableMap",
    "children",
    "conifold_N",
    "count_plane_partitions",
    "count_pyramid_partitions",
    "enumerate_pyramid_partitions_baseline",
    "fit_variable_map",
    "parents",
    "plane_partition_table",
    "point_N",
    "provider_keys",
    "random_symmetric_table",
    "sigma2",
    "symmetric_table",
    "verify_variable_map",
]

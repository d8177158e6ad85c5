"""Class lattice, effective cone and support sets of a flopping contraction."""

from flopdt.lattice.classes import (
    FLOP_MODES,
    Box,
    FlopMode,
    GammaClass,
    Key,
    filtration_level,
    flop_beta,
    flop_pushforward,
    is_effective,
    leq,
)
from flopdt.lattice.loader import (
    ModelRegistry,
    get_model_registry,
    load_model_file,
    parse_key_value,
    read_config_file,
    resolve_model,
)
from flopdt.lattice.model import FlopModel, ModelSummary, Vector, beta_key, dot
from flopdt.lattice.support import (
    Grading,
    SupportSet,
    decompositions,
    support_contains,
)

__all__ = [
    "Box",
    "FLOP_MODES",
    "FlopMode",
    "FlopModel",
    "GammaClass",
    "Grading",
    "Key",
    "ModelRegistry",
    "ModelSummary",
    "SupportSet",
    "Vector",
    "beta_key",
    "decompositions",
    "dot",
    "filtration_level",
    "flop_beta",
    "flop_pushforward",
    "get_model_registry",
    "is_effective",
    "leq",
    "load_model_file",
    "parse_key_value",
    "read_config_file",
    "resolve_model",
    "support_contains",
]

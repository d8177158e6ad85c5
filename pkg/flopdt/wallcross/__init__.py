"""Wall-crossing products along central-charge paths and the verification scenarios."""

from flopdt.wallcross.engine import (
    WallEvent,
    apply_crossing,
    crossing_series,
    detect_walls,
    extract_N,
    flop_crossing,
    region_classes,
    require_b_in_region,
    reverse_events,
    wall_union,
)
from flopdt.wallcross.scenarios import (
    CheckResult,
    Scenario,
    ScenarioContext,
    ScenarioRegistry,
    ScenarioReport,
    registry,
    run_scenario,
)

__all__ = [
    "CheckResult",
    "Scenario",
    "ScenarioContext",
    "ScenarioRegistry",
    "ScenarioReport",
    "WallEvent",
    "apply_crossing",
    "crossing_series",
    "detect_walls",
    "extract_N",
    "flop_crossing",
    "region_classes",
    "registry",
    "require_b_in_region",
    "reverse_events",
    "run_scenario",
    "wall_union",
]

"""Cellular-automaton crowd evacuation simulator with 1x2 rectangular evacuees."""

from .agent import (
    Evacuee,
    MoveClass,
    Orientation,
    Placement,
    enumerate_rotations,
    enumerate_translations,
)
from .dynamics import (
    EscapeResult,
    Intent,
    Params,
    SimState,
    commit,
    decide_intent,
    resolve_conflicts,
    run_until_empty,
    select_candidate,
    step,
)
from .experiment import (
    RunStats,
    SweepResult,
    escape_times,
    heatmap,
    mean_escape_time,
    moving_average,
    optimal_line,
    run_one,
    sweep_r,
    sweep_v,
)
from .grid import (
    Cell,
    ConfigurationError,
    FloorField,
    RoomGeometry,
    build_room,
    compute_sff,
    sff_of_placement,
)
from .scenario import InitConfig, PlacementError, ScenarioKind, place_evacuees

__version__ = "0.1.0"

__all__ = [
    "Cell",
    "ConfigurationError",
    "EscapeResult",
    "Evacuee",
    "FloorField",
    "InitConfig",
    "Intent",
    "MoveClass",
    "Orientation",
    "Params",
    "Placement",
    "PlacementError",
    "RoomGeometry",
    "RunStats",
    "ScenarioKind",
    "SimState",
    "SweepResult",
    "build_room",
    "commit",
    "compute_sff",
    "decide_intent",
    "enumerate_rotations",
    "enumerate_translations",
    "escape_times",
    "heatmap",
    "mean_escape_time",
    "moving_average",
    "optimal_line",
    "place_evacuees",
    "resolve_conflicts",
    "run_one",
    "run_until_empty",
    "select_candidate",
    "sff_of_placement",
    "step",
    "sweep_r",
    "sweep_v",
]

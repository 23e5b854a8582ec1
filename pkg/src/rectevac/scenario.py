"""Initial-condition construction for the three experiment scenarios."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .agent import Orientation, Placement
from .dynamics import Params, SimState
from .grid import Cell, ConfigurationError, build_room


class PlacementError(RuntimeError):
    """Raised when random placement cannot fit the requested density."""


class ScenarioKind(Enum):
    """Initial orientation plus turning regime.

    Forward and sideways are the no-turning controls; they override any
    configured turn probability with zero.
    """

    FORWARD = "forward"  # all bodies face the exit, no turning
    SIDEWAYS = "sideways"  # all bodies face sideways to the exit, no turning
    TURN = "turn"  # bodies face the exit, turning allowed

    @property
    def initial_orientation(self) -> Orientation:
        return Orientation.VERTICAL if self is ScenarioKind.SIDEWAYS else Orientation.HORIZONTAL

    @property
    def turning_allowed(self) -> bool:
        return self is ScenarioKind.TURN


@dataclass(frozen=True)
class InitConfig:
    """One run's full configuration: room, density, scenario, rule parameters."""

    scenario: ScenarioKind
    params: Params
    side: int = 50
    rho: float = 0.5
    seed: int = 0
    exit_width: int = 4

    def __post_init__(self):
        if not 0.0 <= self.rho <= 0.8:
            raise ConfigurationError(
                f"initial density rho must be in [0, 0.8], got {self.rho}"
            )

    @property
    def evacuee_count(self) -> int:
        """Number of bodies covering a rho fraction of the interior cells."""
        return int(self.rho * self.side * self.side / 2 + 1e-9)

    @property
    def effective_params(self) -> Params:
        """Run parameters with the turn probability forced to 0 outside the turn scenario."""
        if self.scenario.turning_allowed:
            return self.params
        return replace(self.params, r=0.0)


def place_evacuees(
    config: InitConfig, rng: np.random.Generator, *, max_rejections: int = 1_000_000
) -> SimState:
    """Sample non-overlapping uniform placements sharing the scenario's orientation.

    Rejection sampling: draw a uniform interior anchor and accept when both
    body cells are interior and unoccupied. Raises PlacementError after
    ``max_rejections`` consecutive rejections (infeasible density).
    """
    geometry = build_room(config.side, config.exit_width)
    side = config.side
    orientation = config.scenario.initial_orientation
    horizontal = orientation is Orientation.HORIZONTAL
    target = config.evacuee_count

    occupied = np.zeros((side, side), dtype=bool)
    anchors: list[Cell] = []
    rejections = 0
    while len(anchors) < target:
        if rejections >= max_rejections:
            raise PlacementError(
                f"gave up after {max_rejections} consecutive rejected draws while placing "
                f"evacuee {len(anchors) + 1} of {target} (rho={config.rho}, side={side})"
            )
        flat = int(rng.integers(0, side * side))
        col = flat % side
        row = flat // side
        c2, r2 = (col + 1, row) if horizontal else (col, row + 1)
        if c2 >= side or r2 >= side or occupied[row, col] or occupied[r2, c2]:
            rejections += 1
            continue
        rejections = 0
        occupied[row, col] = occupied[r2, c2] = True
        anchors.append(Cell(col, row))

    placements = [Placement(anchor, orientation) for anchor in anchors]
    return SimState.from_placements(geometry, placements)

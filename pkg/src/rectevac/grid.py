"""Room geometry, exit placement, and the static floor field."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

if TYPE_CHECKING:
    from .agent import Placement


class ConfigurationError(ValueError):
    """Raised when a room or run configuration cannot be simulated."""


class Cell(NamedTuple):
    """Grid cell address.

    Row 0 is the bottom interior row; the exit segment sits in the wall
    row below it (row -1). Columns run 0..side-1 inside the room.
    """

    col: int
    row: int


@dataclass(frozen=True)
class RoomGeometry:
    """Square room enclosed by a wall ring with one exit segment at the bottom.

    Interior cells satisfy ``0 <= col, row < side``. Every ring cell
    (col or row equal to -1 or ``side``) is a wall except the exit cells,
    which are enterable. ``cell_size_m`` is recorded metadata only; all
    dynamics run in cell units. Instances are immutable and safe to share
    across concurrent runs.
    """

    side: int
    exit_cells: tuple[Cell, ...]
    wall_mask: np.ndarray = field(repr=False, compare=False)
    exit_mask: np.ndarray = field(repr=False, compare=False)
    cell_size_m: float = 0.20

    @property
    def exit_width(self) -> int:
        return len(self.exit_cells)

    def is_interior(self, cell: Cell) -> bool:
        return 0 <= cell.col < self.side and 0 <= cell.row < self.side

    def is_exit(self, cell: Cell) -> bool:
        return cell.row == -1 and self.exit_cells[0].col <= cell.col <= self.exit_cells[-1].col

    def is_wall(self, cell: Cell) -> bool:
        """True for every cell that can never be occupied (total on all coords)."""
        return not (self.is_interior(cell) or self.is_exit(cell))


def build_room(side: int, exit_width: int = 4) -> RoomGeometry:
    """Construct a ``side`` x ``side`` room with a centered bottom exit.

    The exit occupies ``exit_width`` contiguous columns of the bottom wall
    row, horizontally centered (columns side/2-2 .. side/2+1 for the
    default width on an even side).
    """
    if side < 4:
        raise ConfigurationError(f"room side must be at least 4 cells, got {side}")
    if not 1 <= exit_width <= side:
        raise ConfigurationError(
            f"exit width must be between 1 and the room side ({side}), got {exit_width}"
        )
    start = (side - exit_width) // 2
    exit_cells = tuple(Cell(c, -1) for c in range(start, start + exit_width))

    # masks cover the extended grid; index [row + 1, col + 1]
    wall = np.zeros((side + 2, side + 2), dtype=bool)
    wall[0, :] = wall[-1, :] = True
    wall[:, 0] = wall[:, -1] = True
    exit_mask = np.zeros_like(wall)
    for cell in exit_cells:
        wall[0, cell.col + 1] = False
        exit_mask[0, cell.col + 1] = True
    wall.setflags(write=False)
    exit_mask.setflags(write=False)
    return RoomGeometry(side=side, exit_cells=exit_cells, wall_mask=wall, exit_mask=exit_mask)


@dataclass(frozen=True)
class FloorField:
    """Static scalar field over all enterable cells.

    The value at a cell is the negated Euclidean distance (in cell units)
    from the cell center to the nearest exit cell, so it is 0 exactly on
    the exit segment and decreases away from it. Wall cells carry ``-inf``
    in the backing array and are undefined for lookups.
    """

    geometry: RoomGeometry
    values: np.ndarray = field(repr=False, compare=False)

    def value_at(self, cell: Cell) -> float:
        if self.geometry.is_wall(cell):
            raise ValueError(f"floor field is undefined on wall cell {cell}")
        return float(self.values[cell.row + 1, cell.col + 1])


def compute_sff(geometry: RoomGeometry) -> FloorField:
    """Compute the static floor field of a room."""
    exits = [(cell.col, cell.row) for cell in geometry.exit_cells]
    values = np.full((geometry.side + 2, geometry.side + 2), -np.inf)
    for row in range(-1, geometry.side + 1):
        for col in range(-1, geometry.side + 1):
            if not geometry.wall_mask[row + 1, col + 1]:
                values[row + 1, col + 1] = -min(
                    math.hypot(col - ec, row - er) for ec, er in exits
                )
    values.setflags(write=False)
    return FloorField(geometry=geometry, values=values)


def sff_of_placement(field_: FloorField, placement: Placement) -> float:
    """Mean field value over the two cells of a placement.

    Raises ValueError if either cell is a wall; callers are expected to
    pre-filter wall-blocked placements.
    """
    a, b = placement.cells()
    return (field_.value_at(a) + field_.value_at(b)) / 2.0

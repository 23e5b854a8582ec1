"""Evacuee bodies and the move sets they can reach in one step."""

from __future__ import annotations

from enum import Enum
from typing import NamedTuple

from .grid import Cell, RoomGeometry


class Orientation(Enum):
    """Long-axis direction of the 1x2 body."""

    HORIZONTAL = 0  # shoulders parallel to the exit wall: facing the exit
    VERTICAL = 1  # long axis vertical: facing sideways to the exit

    def toggled(self) -> Orientation:
        return Orientation.VERTICAL if self is Orientation.HORIZONTAL else Orientation.HORIZONTAL


class MoveClass(Enum):
    STAY = "stay"
    FORWARD_BACKWARD = "forward_backward"  # translation across the long axis
    SIDEWAYS = "sideways"  # translation along the long axis; gated by v
    ROTATION = "rotation"  # 90-degree pivot about one body cell


class Placement(NamedTuple):
    """Two adjacent occupied cells, addressed by their lower-left anchor."""

    anchor: Cell
    orientation: Orientation

    def cells(self) -> tuple[Cell, Cell]:
        c, r = self.anchor
        if self.orientation is Orientation.HORIZONTAL:
            return (Cell(c, r), Cell(c + 1, r))
        return (Cell(c, r), Cell(c, r + 1))


class Evacuee(NamedTuple):
    id: int
    placement: Placement


# Unit translations in fixed candidate order (+y, -y, +x, -x). The order is
# part of the draw-reproducibility contract in `dynamics`.
TRANSLATION_STEPS: tuple[tuple[int, int], ...] = ((0, 1), (0, -1), (1, 0), (-1, 0))

# Anchor shift of the four pivot placements per current orientation, in fixed
# candidate order (low-pivot cw, low-pivot ccw, high-pivot cw, high-pivot ccw).
# Each pivot placement keeps exactly one body cell and toggles the orientation.
ROTATION_SHIFTS: dict[Orientation, tuple[tuple[int, int], ...]] = {
    Orientation.HORIZONTAL: ((0, -1), (0, 0), (1, 0), (1, -1)),
    Orientation.VERTICAL: ((0, 0), (-1, 0), (-1, 1), (0, 1)),
}

# Cell swept by the moving end of each pivot, as an offset from the body
# anchor: the diagonal corner of the 2x2 square spanned by the old and new
# placements. A rotation is infeasible when this corner is a wall (the arc
# would cross it); evacuees occupying it do not block (transient sweep).
SWEPT_OFFSETS: dict[Orientation, tuple[tuple[int, int], ...]] = {
    Orientation.HORIZONTAL: ((1, -1), (1, 1), (0, 1), (0, -1)),
    Orientation.VERTICAL: ((1, 1), (-1, 1), (-1, 0), (1, 0)),
}


def _blocked(geometry: RoomGeometry, placement: Placement) -> bool:
    a, b = placement.cells()
    return geometry.is_wall(a) or geometry.is_wall(b)


def enumerate_translations(
    evacuee: Evacuee, geometry: RoomGeometry
) -> list[tuple[Placement, MoveClass]]:
    """Stay plus the wall-free unit translations of the body (von Neumann set).

    Candidates occupied by other evacuees are not filtered here; occupancy
    is resolved by the two-attempt search in `dynamics`.
    """
    placement = evacuee.placement
    horizontal = placement.orientation is Orientation.HORIZONTAL
    out = [(placement, MoveClass.STAY)]
    for dx, dy in TRANSLATION_STEPS:
        target = Placement(
            Cell(placement.anchor.col + dx, placement.anchor.row + dy), placement.orientation
        )
        if _blocked(geometry, target):
            continue
        sideways = (dx != 0) if horizontal else (dy != 0)
        out.append((target, MoveClass.SIDEWAYS if sideways else MoveClass.FORWARD_BACKWARD))
    return out


def enumerate_rotations(
    evacuee: Evacuee, geometry: RoomGeometry
) -> list[tuple[Placement, MoveClass]]:
    """Stay plus the feasible 90-degree pivots about either body cell.

    A pivot is feasible when both final cells and the swept corner of its
    2x2 square are wall-free.
    """
    placement = evacuee.placement
    shifts = ROTATION_SHIFTS[placement.orientation]
    swept = SWEPT_OFFSETS[placement.orientation]
    out = [(placement, MoveClass.STAY)]
    for (dc, dr), (sc, sr) in zip(shifts, swept):
        target = Placement(
            Cell(placement.anchor.col + dc, placement.anchor.row + dr),
            placement.orientation.toggled(),
        )
        if _blocked(geometry, target):
            continue
        if geometry.is_wall(Cell(placement.anchor.col + sc, placement.anchor.row + sr)):
            continue
        out.append((target, MoveClass.ROTATION))
    return out

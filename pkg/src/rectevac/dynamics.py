"""One synchronous simulation step: candidate selection, two-attempt occupancy
search, conflict resolution, commit, and exit removal.

`step` and `run_until_empty` drive compiled kernels by default; passing
``compiled=False`` to `step` runs the pure-Python reference composition
(decide intents for every evacuee, resolve conflicts, commit), which consumes
the random stream identically and produces bit-identical trajectories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _kernels
from .agent import (
    Evacuee,
    MoveClass,
    Orientation,
    Placement,
    enumerate_rotations,
    enumerate_translations,
)
from .grid import Cell, ConfigurationError, FloorField, RoomGeometry, sff_of_placement


@dataclass(frozen=True)
class Params:
    """Step-rule parameters.

    r is the per-step turn probability, v the pass probability of a selected
    sideways move (relative sideways speed), k the recognition noise of the
    softmax over floor-field values.
    """

    r: float
    v: float
    k: float = 0.1
    max_steps: int = 1_000_000

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise ConfigurationError(f"turn probability r must be in [0, 1], got {self.r}")
        if not 0.0 < self.v <= 1.0:
            raise ConfigurationError(f"sideways speed v must be in (0, 1], got {self.v}")
        if not self.k > 0.0:
            raise ConfigurationError(f"recognition noise k must be positive, got {self.k}")
        if self.max_steps <= 0:
            raise ConfigurationError(f"max_steps must be positive, got {self.max_steps}")


class Intent(NamedTuple):
    """An evacuee's resolved choice for the step."""

    evacuee_id: int
    target: Placement
    move_class: MoveClass


class EscapeResult(NamedTuple):
    escape_time: int
    completed: bool  # False when the step cap was hit (censored run)


class SimState:
    """Mutable simulation state: live bodies plus an occupancy index.

    Bodies live in parallel arrays indexed by slot; removal compacts slots
    by swapping the last live body down, so slot order is deterministic.
    The occupancy grid maps extended-grid cells to slot indices (-1 empty).
    """

    def __init__(
        self,
        geometry: RoomGeometry,
        cols: np.ndarray,
        rows: np.ndarray,
        horiz: np.ndarray,
        ids: np.ndarray,
        *,
        time: int = 0,
        escaped_count: int = 0,
        initial_count: int | None = None,
    ):
        self.geometry = geometry
        self.time = time
        self.escaped_count = escaped_count
        self.n = len(ids)
        self.initial_count = self.n + escaped_count if initial_count is None else initial_count
        self._cols = np.ascontiguousarray(cols, dtype=np.int64)
        self._rows = np.ascontiguousarray(rows, dtype=np.int64)
        self._horiz = np.ascontiguousarray(horiz, dtype=np.bool_)
        self._ids = np.ascontiguousarray(ids, dtype=np.int64)
        side = geometry.side
        self._occ = np.full((side + 2, side + 2), -1, dtype=np.int64)
        self._claim = np.full((side + 2, side + 2), -1, dtype=np.int64)
        for i in range(self.n):
            for cell in self._slot_placement(i).cells():
                if geometry.is_wall(cell):
                    raise ValueError(f"placement of evacuee {ids[i]} occupies wall cell {cell}")
                if self._occ[cell.row + 1, cell.col + 1] != -1:
                    raise ValueError(f"evacuees overlap on cell {cell}")
                self._occ[cell.row + 1, cell.col + 1] = i

    @classmethod
    def from_placements(
        cls,
        geometry: RoomGeometry,
        placements: Sequence[Placement],
        *,
        ids: Sequence[int] | None = None,
        time: int = 0,
    ) -> SimState:
        n = len(placements)
        if ids is None:
            ids = range(n)
        cols = np.array([p.anchor.col for p in placements], dtype=np.int64)
        rows = np.array([p.anchor.row for p in placements], dtype=np.int64)
        horiz = np.array(
            [p.orientation is Orientation.HORIZONTAL for p in placements], dtype=np.bool_
        )
        return cls(geometry, cols, rows, horiz, np.array(list(ids), dtype=np.int64), time=time)

    def _slot_placement(self, slot: int) -> Placement:
        orientation = Orientation.HORIZONTAL if self._horiz[slot] else Orientation.VERTICAL
        return Placement(Cell(int(self._cols[slot]), int(self._rows[slot])), orientation)

    @property
    def evacuees(self) -> tuple[Evacuee, ...]:
        return tuple(
            Evacuee(int(self._ids[i]), self._slot_placement(i)) for i in range(self.n)
        )

    def placement_of(self, evacuee_id: int) -> Placement:
        return self._slot_placement(self._slot_of(evacuee_id))

    def _slot_of(self, evacuee_id: int) -> int:
        for i in range(self.n):
            if self._ids[i] == evacuee_id:
                return i
        raise KeyError(f"no live evacuee with id {evacuee_id}")

    def occupant_of(self, cell: Cell) -> int | None:
        """Id of the evacuee occupying a cell, or None."""
        if not (-1 <= cell.col <= self.geometry.side and -1 <= cell.row <= self.geometry.side):
            return None
        slot = self._occ[cell.row + 1, cell.col + 1]
        return None if slot < 0 else int(self._ids[slot])

    def is_free_for(self, placement: Placement, evacuee_id: int) -> bool:
        """True when no other evacuee occupies any cell of the placement."""
        for cell in placement.cells():
            occupant = self.occupant_of(cell)
            if occupant is not None and occupant != evacuee_id:
                return False
        return True

    def copy(self) -> SimState:
        dup = object.__new__(SimState)
        dup.geometry = self.geometry
        dup.time = self.time
        dup.escaped_count = self.escaped_count
        dup.n = self.n
        dup.initial_count = self.initial_count
        dup._cols = self._cols.copy()
        dup._rows = self._rows.copy()
        dup._horiz = self._horiz.copy()
        dup._ids = self._ids.copy()
        dup._occ = self._occ.copy()
        dup._claim = self._claim.copy()
        return dup

    def snapshot(self) -> tuple:
        """Hashable view of the live configuration, for trajectory comparisons."""
        bodies = tuple(
            (int(self._ids[i]), int(self._cols[i]), int(self._rows[i]), bool(self._horiz[i]))
            for i in range(self.n)
        )
        return (self.time, self.escaped_count, bodies)

    def check_consistency(self) -> None:
        """Verify no-overlap, occupancy agreement, and conservation; raise on violation."""
        side = self.geometry.side
        rebuilt = np.full((side + 2, side + 2), -1, dtype=np.int64)
        for i in range(self.n):
            for cell in self._slot_placement(i).cells():
                if self.geometry.is_wall(cell):
                    raise RuntimeError(f"evacuee {self._ids[i]} occupies wall cell {cell}")
                if rebuilt[cell.row + 1, cell.col + 1] != -1:
                    raise RuntimeError(f"two evacuees overlap on cell {cell}")
                rebuilt[cell.row + 1, cell.col + 1] = i
        if not np.array_equal(rebuilt, self._occ):
            raise RuntimeError("occupancy index disagrees with evacuee placements")
        if self.escaped_count + self.n != self.initial_count:
            raise RuntimeError(
                f"conservation violated: {self.escaped_count} escaped + {self.n} live "
                f"!= {self.initial_count} initial"
            )


def select_candidate(
    candidates: Sequence[tuple[Placement, MoveClass]],
    field_: FloorField,
    params: Params,
    rng: np.random.Generator,
) -> tuple[Placement, MoveClass]:
    """Draw one candidate: softmax over mean field values, then the sideways gate.

    Stage one draws candidate c with probability exp(S_c/k) normalized over
    the list; stage two keeps a sideways draw with probability v and
    otherwise converts the outcome to the stay entry. Other move classes
    pass unchanged. Cumulative sums walk the list in its given order.
    """
    svals = [sff_of_placement(field_, p) for p, _ in candidates]
    smax = max(svals)
    weights = [math.exp((s - smax) / params.k) for s in svals]
    total = 0.0
    for w in weights:
        total += w
    threshold = rng.random() * total
    chosen = 0
    acc = 0.0
    for i, w in enumerate(weights):
        acc += w
        chosen = i
        if threshold < acc:
            break
    placement, move_class = candidates[chosen]
    if move_class is MoveClass.SIDEWAYS and rng.random() >= params.v:
        for cand in candidates:
            if cand[1] is MoveClass.STAY:
                return cand
        raise ValueError("candidate list must include the current placement (stay)")
    return candidates[chosen]


def decide_intent(
    evacuee: Evacuee,
    state: SimState,
    field_: FloorField,
    geometry: RoomGeometry,
    params: Params,
    rng: np.random.Generator,
) -> Intent:
    """Resolve one evacuee's move for this step against the time-t occupancy.

    Turn with probability r (rotation set) else translate set, draw via
    `select_candidate`, and retry once from scratch if the target is
    occupied by another evacuee. A failed second attempt, or a sideways
    gate failure at any attempt, yields a stay.
    """
    current = evacuee.placement
    for _attempt in range(2):
        turning = rng.random() < params.r
        if turning:
            candidates = enumerate_rotations(evacuee, geometry)
        else:
            candidates = enumerate_translations(evacuee, geometry)
        placement, move_class = select_candidate(candidates, field_, params, rng)
        if move_class is MoveClass.STAY:
            return Intent(evacuee.id, current, MoveClass.STAY)
        if not state.is_free_for(placement, evacuee.id):
            continue
        return Intent(evacuee.id, placement, move_class)
    return Intent(evacuee.id, current, MoveClass.STAY)


def resolve_conflicts(
    intents: Sequence[Intent], state: SimState, rng: np.random.Generator
) -> set[int]:
    """Grant non-overlapping mover targets in uniformly shuffled order.

    Targets were free of other evacuees at time t (guaranteed by
    `decide_intent`), so contention only arises between movers claiming
    overlapping cells; losers stay. Returns the granted evacuee ids.
    """
    movers = [it for it in intents if it.move_class is not MoveClass.STAY]
    order = list(range(len(movers)))
    for i in range(len(order) - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        order[i], order[j] = order[j], order[i]
    claimed: set[Cell] = set()
    granted: set[int] = set()
    for idx in order:
        intent = movers[idx]
        cells = intent.target.cells()
        if cells[0] in claimed or cells[1] in claimed:
            continue
        claimed.update(cells)
        granted.add(intent.evacuee_id)
    return granted


def commit(state: SimState, granted_intents: Iterable[Intent]) -> SimState:
    """Apply granted moves simultaneously, remove bodies reaching the exit,
    and advance time by one step.

    An overlap among the applied placements indicates a broken caller
    contract and raises instead of being repaired.
    """
    geometry = state.geometry
    slot_by_id = {int(state._ids[i]): i for i in range(state.n)}
    granted_slots = []
    for intent in granted_intents:
        slot = slot_by_id[intent.evacuee_id]
        granted_slots.append((slot, intent.target))

    for slot, _ in granted_slots:
        for cell in state._slot_placement(slot).cells():
            state._occ[cell.row + 1, cell.col + 1] = -1
    for slot, target in granted_slots:
        state._cols[slot] = target.anchor.col
        state._rows[slot] = target.anchor.row
        state._horiz[slot] = target.orientation is Orientation.HORIZONTAL
        for cell in target.cells():
            if state._occ[cell.row + 1, cell.col + 1] != -1:
                raise RuntimeError(f"commit produced overlapping evacuees on {cell}")
            state._occ[cell.row + 1, cell.col + 1] = slot

    removed = 0
    for slot in range(state.n - 1, -1, -1):
        cells = state._slot_placement(slot).cells()
        if not any(geometry.is_exit(c) for c in cells):
            continue
        for cell in cells:
            state._occ[cell.row + 1, cell.col + 1] = -1
        last = state.n - 1 - removed
        if slot != last:
            state._cols[slot] = state._cols[last]
            state._rows[slot] = state._rows[last]
            state._horiz[slot] = state._horiz[last]
            state._ids[slot] = state._ids[last]
            for cell in state._slot_placement(slot).cells():
                state._occ[cell.row + 1, cell.col + 1] = slot
        removed += 1
    state.n -= removed
    state.escaped_count += removed
    state.time += 1
    return state


def step(
    state: SimState,
    field_: FloorField,
    geometry: RoomGeometry,
    params: Params,
    rng: np.random.Generator,
    *,
    compiled: bool = True,
) -> SimState:
    """Advance the state by one synchronous step (in place).

    All intent decisions read the time-t configuration, so their order is
    irrelevant to the outcome distribution; draws are consumed in slot
    order for reproducibility. The compiled path and the reference path
    produce bit-identical successors for the same generator state.
    """
    if compiled:
        n_before = state.n
        state.n = _kernels._step_kernel(
            state.n, state.time, state._cols, state._rows, state._horiz, state._ids,
            state._occ, field_.values, geometry.wall_mask, geometry.exit_mask,
            params.r, params.v, params.k, rng, state._claim,
        )
        state.escaped_count += n_before - state.n
        state.time += 1
        return state
    intents = [
        decide_intent(evacuee, state, field_, geometry, params, rng)
        for evacuee in state.evacuees
    ]
    granted = resolve_conflicts(intents, state, rng)
    granted_intents = [
        it for it in intents if it.move_class is not MoveClass.STAY and it.evacuee_id in granted
    ]
    return commit(state, granted_intents)


def run_until_empty(
    state: SimState,
    field_: FloorField,
    geometry: RoomGeometry,
    params: Params,
    rng: np.random.Generator,
) -> EscapeResult:
    """Step until every evacuee has left or the step cap is reached.

    A run cut off at ``params.max_steps`` is reported as censored
    (``completed=False``), never dropped.
    """
    n_before = state.n
    n_after, time = _kernels._run_kernel(
        state.n, state.time, params.max_steps, state._cols, state._rows, state._horiz,
        state._ids, state._occ, field_.values, geometry.wall_mask, geometry.exit_mask,
        params.r, params.v, params.k, rng, state._claim,
    )
    state.n = n_after
    state.escaped_count += n_before - n_after
    state.time = time
    return EscapeResult(escape_time=time, completed=n_after == 0)

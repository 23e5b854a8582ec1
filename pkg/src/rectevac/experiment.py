"""Monte-Carlo aggregation and parameter sweeps over v, r, and density.

Every run's seed is a pure function of (base seed, grid point index, run
index), so sweeps are bit-reproducible and grid points can be computed in
any order or concurrently.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .dynamics import EscapeResult, run_until_empty
from .grid import compute_sff
from .scenario import InitConfig, ScenarioKind, place_evacuees

ProgressFn = Callable[[int, int, tuple, "RunStats"], None]


@dataclass(frozen=True)
class RunStats:
    """Escape-time statistics of one grid point.

    Mean and std cover completed runs only; censored runs (step cap hit)
    are counted separately and flagged with NaN stats when nothing
    completed.
    """

    mean_escape_time: float
    std: float
    runs: int
    censored: int

    @property
    def all_censored(self) -> bool:
        return self.censored == self.runs


@dataclass
class SweepResult:
    """Grid of RunStats keyed by axis-value tuples, in axes order."""

    axes: dict[str, tuple]
    cells: dict[tuple, RunStats]
    optimal_line: list[tuple[float, float]] | None = field(default=None)

    def stats(self, *key) -> RunStats:
        return self.cells[tuple(key)]


def run_one(config: InitConfig, seed: int) -> EscapeResult:
    """Place and simulate a single run with its own random stream."""
    rng = np.random.default_rng(seed)
    state = place_evacuees(config, rng)
    field_ = compute_sff(state.geometry)
    return run_until_empty(state, field_, state.geometry, config.effective_params, rng)


def escape_times(config: InitConfig, runs: int, *, jobs: int = 1) -> list[EscapeResult]:
    """Escape results of ``runs`` independent runs seeded base .. base+runs-1."""
    if runs < 1:
        raise ValueError(f"runs must be at least 1, got {runs}")
    seeds = [config.seed + i for i in range(runs)]
    if jobs <= 1:
        return [run_one(config, s) for s in seeds]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda s: run_one(config, s), seeds))


def mean_escape_time(config: InitConfig, runs: int, *, jobs: int = 1) -> RunStats:
    """Mean/std escape time over completed runs; censored runs counted aside."""
    results = escape_times(config, runs, jobs=jobs)
    times = [res.escape_time for res in results if res.completed]
    censored = runs - len(times)
    if not times:
        return RunStats(math.nan, math.nan, runs, censored)
    arr = np.asarray(times, dtype=float)
    return RunStats(float(arr.mean()), float(arr.std()), runs, censored)


def _point_config(config: InitConfig, point_index: int, runs: int, **overrides) -> InitConfig:
    params = config.params
    param_overrides = {key: overrides.pop(key) for key in ("r", "v") if key in overrides}
    if param_overrides:
        params = replace(params, **param_overrides)
    return replace(
        config, params=params, seed=config.seed + point_index * runs, **overrides
    )


def sweep_v(
    scenarios: Sequence[ScenarioKind],
    v_grid: Sequence[float],
    config: InitConfig,
    runs: int,
    *,
    jobs: int = 1,
    progress: ProgressFn | None = None,
) -> SweepResult:
    """One RunStats per (scenario, v); the turn scenario keeps the template's r."""
    points = [(scenario, v) for scenario in scenarios for v in v_grid]
    cells: dict[tuple, RunStats] = {}
    for index, (scenario, v) in enumerate(points):
        cfg = _point_config(config, index, runs, scenario=scenario, v=v)
        cells[(scenario, v)] = mean_escape_time(cfg, runs, jobs=jobs)
        if progress is not None:
            progress(index, len(points), (scenario, v), cells[(scenario, v)])
    return SweepResult(
        axes={"scenario": tuple(scenarios), "v": tuple(v_grid)}, cells=cells
    )


def sweep_r(
    r_grid: Sequence[float],
    config: InitConfig,
    runs: int,
    *,
    jobs: int = 1,
    progress: ProgressFn | None = None,
) -> SweepResult:
    """One RunStats per turn probability, in the turn scenario at fixed v."""
    cells: dict[tuple, RunStats] = {}
    for index, r in enumerate(r_grid):
        cfg = _point_config(config, index, runs, scenario=ScenarioKind.TURN, r=r)
        cells[(r,)] = mean_escape_time(cfg, runs, jobs=jobs)
        if progress is not None:
            progress(index, len(r_grid), (r,), cells[(r,)])
    return SweepResult(axes={"r": tuple(r_grid)}, cells=cells)


def heatmap(
    r_grid: Sequence[float],
    col_name: str,
    col_grid: Sequence[float],
    config: InitConfig,
    runs: int,
    *,
    window: int = 5,
    jobs: int = 1,
    progress: ProgressFn | None = None,
) -> SweepResult:
    """Full (r x column) grid of RunStats plus the smoothed optimal-r line.

    ``col_name`` selects the column parameter: "v" (sideways speed) or
    "rho" (initial density).
    """
    if col_name not in ("v", "rho"):
        raise ValueError(f"column parameter must be 'v' or 'rho', got {col_name!r}")
    points = [(r, c) for r in r_grid for c in col_grid]
    cells: dict[tuple, RunStats] = {}
    for index, (r, col) in enumerate(points):
        cfg = _point_config(
            config, index, runs, scenario=ScenarioKind.TURN, r=r, **{col_name: col}
        )
        cells[(r, col)] = mean_escape_time(cfg, runs, jobs=jobs)
        if progress is not None:
            progress(index, len(points), (r, col), cells[(r, col)])
    result = SweepResult(
        axes={"r": tuple(r_grid), col_name: tuple(col_grid)}, cells=cells
    )
    result.optimal_line = optimal_line(result, window=window)
    return result


def moving_average(values: Sequence[float], window: int) -> list[float]:
    """Centered moving average; the window shrinks symmetrically at the ends."""
    if window < 1 or window % 2 == 0:
        raise ValueError(f"window must be odd and positive, got {window}")
    half = window // 2
    n = len(values)
    out = []
    for j in range(n):
        reach = min(half, j, n - 1 - j)
        segment = values[j - reach : j + reach + 1]
        out.append(sum(segment) / len(segment))
    return out


def argmin_per_column(result: SweepResult) -> list[tuple[float, float]]:
    """(column value, r of the smallest mean) per column; ties go to smaller r."""
    names = list(result.axes)
    if names[0] != "r" or len(names) != 2:
        raise ValueError("optimal-line extraction needs axes ('r', column)")
    r_values = result.axes["r"]
    out = []
    for col in result.axes[names[1]]:
        best_r = None
        best_mean = math.inf
        for r in r_values:
            mean = result.cells[(r, col)].mean_escape_time
            if not math.isnan(mean) and mean < best_mean:
                best_mean = mean
                best_r = r
        if best_r is None:
            raise ValueError(f"every grid point in column {col} is censored")
        out.append((col, best_r))
    return out


def optimal_line(result: SweepResult, window: int = 5) -> list[tuple[float, float]]:
    """Per-column argmin r, smoothed across columns by a centered moving average."""
    raw = argmin_per_column(result)
    smoothed = moving_average([r for _, r in raw], window)
    return [(col, r) for (col, _), r in zip(raw, smoothed)]

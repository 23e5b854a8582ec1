"""Acceptance suite: full-scale statistical checks of the simulator.

Every criterion runs at the production scale (side 50, density 0.5, 100
runs per grid point) with fixed seeds and prints one PASS/FAIL line.
"""

import math

import numpy as np
import pytest
from scipy import stats as scipy_stats

from rectevac import (
    Cell,
    Evacuee,
    InitConfig,
    MoveClass,
    Orientation,
    Params,
    Placement,
    ScenarioKind,
    SimState,
    build_room,
    compute_sff,
    enumerate_translations,
    heatmap,
    mean_escape_time,
    moving_average,
    place_evacuees,
    run_until_empty,
    select_candidate,
    step,
    sweep_r,
    sweep_v,
)

from .oracles import expected_single_escape_time, two_stage_distribution

SIDE = 50
RHO = 0.5
RUNS = 100
SCENARIOS = [ScenarioKind.FORWARD, ScenarioKind.SIDEWAYS, ScenarioKind.TURN]


def _report(number, ok, detail):
    print(f"\nACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {number}: {detail}"


def _config(seed, *, rho=RHO, r=0.5, v=0.33, scenario=ScenarioKind.TURN):
    return InitConfig(
        scenario=scenario, params=Params(r=r, v=v), side=SIDE, rho=rho, seed=seed
    )


@pytest.fixture(scope="module")
def crossover_sweep():
    grid = tuple(round(0.05 * i, 2) for i in range(1, 21))
    result = sweep_v(SCENARIOS, grid, _config(10_000), RUNS)
    means = {
        scenario: [result.cells[(scenario, v)].mean_escape_time for v in grid]
        for scenario in SCENARIOS
    }
    return grid, means


def test_criterion_1_scenario_crossover(crossover_sweep):
    grid, means = crossover_sweep
    failures = []
    for i, v in enumerate(grid):
        forward = means[ScenarioKind.FORWARD][i]
        sideways = means[ScenarioKind.SIDEWAYS][i]
        turn = means[ScenarioKind.TURN][i]
        if v >= 0.45 and not (sideways < turn and sideways < forward):
            failures.append(f"v={v}: sideways not fastest")
        if v <= 0.30 and not (turn < sideways and turn < forward):
            failures.append(f"v={v}: turn not fastest")
    crossover = next(
        (
            v
            for i, v in enumerate(grid)
            if means[ScenarioKind.SIDEWAYS][i] < means[ScenarioKind.TURN][i]
        ),
        None,
    )
    detail = f"sideways/turn crossover at v={crossover}; " + (
        "; ".join(failures) if failures else "orderings hold on both sides"
    )
    _report(1, not failures, detail)


def test_criterion_2_monotone_in_v(crossover_sweep):
    grid, means = crossover_sweep
    correlations = {}
    for scenario in SCENARIOS:
        rho_s, _ = scipy_stats.spearmanr(grid, means[scenario])
        correlations[scenario.value] = round(float(rho_s), 4)
    ok = all(c <= -0.9 for c in correlations.values())
    _report(2, ok, f"spearman(mean escape time, v) = {correlations}")


def test_criterion_3_optimal_turn_rate():
    r_grid = tuple(round(0.02 * i, 2) for i in range(50))  # 0.00 .. 0.98
    result = sweep_r(r_grid, _config(20_000), RUNS)
    means = [result.cells[(r,)].mean_escape_time for r in r_grid]
    smoothed = moving_average(means, 5)
    r_star = r_grid[int(np.argmin(smoothed))]
    best = min(means)
    margin_low = means[0] / best
    margin_high = means[-1] / best
    ok = 0.60 <= r_star <= 0.85 and margin_low >= 1.05 and margin_high >= 1.05
    _report(
        3,
        ok,
        f"smoothed argmin r*={r_star} (want [0.60, 0.85]); "
        f"mean(r=0)/min={margin_low:.3f}, mean(r=0.98)/min={margin_high:.3f} (want >= 1.05)",
    )


def test_criterion_4_high_speed_regime():
    r_grid = tuple(round(0.05 * i, 2) for i in range(20))  # 0.00 .. 0.95
    v_cols = (0.70, 0.75, 0.80, 0.85, 0.90)
    result = heatmap(r_grid, "v", v_cols, _config(30_000), RUNS, window=5)
    line = dict(result.optimal_line)
    ok = line[0.80] <= 0.25
    _report(4, ok, f"smoothed optimal r at v=0.80 is {line[0.80]:.3f} (want <= 0.25)")


def test_criterion_5_density_monotonicity():
    rhos = [round(0.1 * i, 1) for i in range(1, 9)]
    means = []
    for i, rho in enumerate(rhos):
        stats = mean_escape_time(_config(40_000 + i * RUNS, rho=rho, r=0.7), RUNS)
        assert stats.censored == 0
        means.append(stats.mean_escape_time)
    inversions = sum(1 for a, b in zip(means, means[1:]) if b < a)
    _report(
        5,
        inversions <= 1,
        f"adjacent inversions={inversions} over means "
        + "[" + ", ".join(f"{m:.0f}" for m in means) + "]",
    )


def _exit_fixture_escapes(placements, seeds, v):
    room = build_room(SIDE)
    field = compute_sff(room)
    params = Params(r=0.0, v=v, max_steps=3)
    successes = 0
    for seed in seeds:
        state = SimState.from_placements(room, placements)
        rng = np.random.default_rng(seed)
        result = run_until_empty(state, field, room, params, rng)
        successes += result.completed
    return successes


def test_criterion_6_exit_throughput():
    abreast = [Placement(Cell(c, 0), Orientation.VERTICAL) for c in (23, 24, 25, 26)]
    four_ok = _exit_fixture_escapes(abreast, range(50_000, 51_000), v=1.0)

    aligned = [Placement(Cell(c, 0), Orientation.HORIZONTAL) for c in (23, 25)]
    two_ok = _exit_fixture_escapes(aligned, range(51_000, 52_000), v=1.0)

    # an edge-straddling body may only leave via fully-enterable destinations
    room = build_room(SIDE)
    field = compute_sff(room)
    params = Params(r=0.0, v=0.33)
    steps = violations = 0
    seed = 52_000
    while steps < 10_000:
        state = SimState.from_placements(
            room, [Placement(Cell(22, 0), Orientation.HORIZONTAL)]
        )
        rng = np.random.default_rng(seed)
        seed += 1
        while state.n and steps < 10_000:
            step(state, field, room, params, rng)
            steps += 1
            for evacuee in state.evacuees:
                if any(room.is_wall(c) for c in evacuee.placement.cells()):
                    violations += 1
    ok = four_ok >= 990 and two_ok >= 990 and violations == 0
    _report(
        6,
        ok,
        f"4-abreast sideways exits: {four_ok}/1000 within 3 steps; "
        f"2 aligned forward exits: {two_ok}/1000; "
        f"partial-wall violations: {violations} in {steps} steps",
    )


def test_criterion_7_invariant_suite():
    # no-overlap, occupancy agreement, conservation across randomized steps
    checked = 0
    for density_index, rho in enumerate((0.1, 0.5, 0.8)):
        quota = 3_334
        seed = 60_000 + density_index
        while quota > 0:
            config = _config(seed, rho=rho)
            rng = np.random.default_rng(seed)
            seed += 1
            state = place_evacuees(config, rng)
            field = compute_sff(state.geometry)
            while state.n and quota > 0:
                step(state, field, state.geometry, config.params, rng)
                state.check_consistency()
                checked += 1
                quota -= 1

    # r=0 keeps every orientation for the whole run
    config = InitConfig(
        scenario=ScenarioKind.FORWARD, params=Params(r=0.5, v=0.5), side=20, rho=0.3,
        seed=61_000,
    )
    rng = np.random.default_rng(config.seed)
    state = place_evacuees(config, rng)
    field = compute_sff(state.geometry)
    orientations_kept = True
    while state.n:
        step(state, field, state.geometry, config.effective_params, rng)
        orientations_kept &= bool(state._horiz[: state.n].all())

    # identical seeds give bit-identical trajectories
    def run_snapshots(seed):
        cfg = InitConfig(
            scenario=ScenarioKind.TURN, params=Params(r=0.5, v=0.4), side=20, rho=0.4,
            seed=seed,
        )
        rng = np.random.default_rng(seed)
        state = place_evacuees(cfg, rng)
        f = compute_sff(state.geometry)
        snaps = []
        while state.n:
            step(state, f, state.geometry, cfg.params, rng)
            snaps.append(state.snapshot())
        return snaps

    deterministic = run_snapshots(62_000) == run_snapshots(62_000)

    # single-evacuee escape matches the exact first-passage oracle
    oracle = expected_single_escape_time(12, 4, (5, 8), 0.1)
    room = build_room(12)
    field = compute_sff(room)
    params = Params(r=0.0, v=1.0)
    times = []
    for seed in range(63_000, 64_000):
        state = SimState.from_placements(
            room, [Placement(Cell(5, 8), Orientation.HORIZONTAL)]
        )
        result = run_until_empty(state, field, room, params, np.random.default_rng(seed))
        times.append(result.escape_time)
    oracle_gap = abs(np.mean(times) / oracle - 1.0)

    ok = checked >= 10_000 and orientations_kept and deterministic and oracle_gap <= 0.05
    _report(
        7,
        ok,
        f"{checked} randomized steps consistent; orientations kept: {orientations_kept}; "
        f"deterministic: {deterministic}; first-passage gap {oracle_gap:.2%} "
        f"(oracle {oracle:.4f}, simulated {np.mean(times):.4f})",
    )


def test_criterion_8_two_stage_draw_frequencies():
    room = build_room(SIDE)
    field = compute_sff(room)
    params = Params(r=0.0, v=0.4)
    body = Placement(Cell(30, 10), Orientation.HORIZONTAL)
    evacuee = Evacuee(0, body)
    candidates = enumerate_translations(evacuee, room)
    assert len(candidates) == 5

    svals = [
        (field.value_at(p.cells()[0]) + field.value_at(p.cells()[1])) / 2
        for p, _ in candidates
    ]
    classes = [
        {"stay": "stay", "forward_backward": "fb", "sideways": "side"}[mc.value]
        for _, mc in candidates
    ]
    expected = two_stage_distribution(svals, classes, params.v, params.k)

    draws = 1_000_000
    rng = np.random.default_rng(70_000)
    anchors = [p.anchor for p, _ in candidates]
    counts = np.zeros(len(candidates))
    for _ in range(draws):
        placement, _ = select_candidate(candidates, field, params, rng)
        counts[anchors.index(placement.anchor)] += 1

    deviations = []
    ok = True
    for i, p in enumerate(expected):
        sigma = math.sqrt(draws * p * (1.0 - p))
        bound = 3.0 * sigma + 1.0
        gap = abs(counts[i] - draws * p)
        deviations.append(f"{classes[i]}@{anchors[i]}: {gap:.0f}<= {bound:.0f}")
        ok &= gap <= bound
    _report(8, ok, "per-candidate |observed-expected| within 3 sigma: " + "; ".join(deviations))

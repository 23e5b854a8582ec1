"""Command-line entry point: runs, sweeps, heatmaps, and bit-exact CSV output.

Exit codes: 0 success, 2 configuration error, 3 output I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence

from .dynamics import Params
from .experiment import (
    RunStats,
    SweepResult,
    argmin_per_column,
    escape_times,
    heatmap,
    sweep_r,
    sweep_v,
)
from .grid import ConfigurationError
from .scenario import InitConfig, PlacementError, ScenarioKind

_SCENARIOS = {kind.value: kind for kind in ScenarioKind}


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".6g")
    return str(value)


def _grid(lo: float, hi: float, step: float, name: str) -> tuple[float, ...]:
    if step <= 0:
        raise ConfigurationError(f"{name} grid step must be positive, got {step}")
    if hi < lo:
        raise ConfigurationError(f"{name} grid has max {hi} below min {lo}")
    count = int(math.floor((hi - lo) / step + 0.5)) + 1
    return tuple(round(lo + i * step, 10) for i in range(count))


def _add_common(parser: argparse.ArgumentParser, default_output: str) -> None:
    parser.add_argument("--size", type=int, default=50, help="room side length in cells")
    parser.add_argument("--rho", type=float, default=0.5, help="initial occupied-cell density")
    parser.add_argument("--r", type=float, default=0.5, help="turn probability")
    parser.add_argument("--v", type=float, default=0.33, help="relative sideways speed")
    parser.add_argument("--k", type=float, default=0.1, help="recognition noise")
    parser.add_argument("--exit-width", type=int, default=4, help="exit width in cells")
    parser.add_argument("--max-steps", type=int, default=1_000_000, help="censoring step cap")
    parser.add_argument("--runs", type=int, default=100, help="runs per data point")
    parser.add_argument("--seed", type=int, default=0, help="base seed")
    parser.add_argument("--jobs", type=int, default=1, help="concurrent runs")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")
    parser.add_argument("-o", "--output", default=default_output, help="output CSV path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rectevac",
        description="Crowd evacuation simulator with 1x2 rectangular evacuees",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="independent runs of one configuration")
    _add_common(p_run, "run.csv")
    p_run.add_argument(
        "--scenario", choices=sorted(_SCENARIOS), default="turn", help="initial scenario"
    )

    p_sv = sub.add_parser("sweep-v", help="escape time vs sideways speed per scenario")
    _add_common(p_sv, "sweep_v.csv")
    p_sv.add_argument(
        "--scenarios",
        default="forward,sideways,turn",
        help="comma-separated scenario list",
    )
    p_sv.add_argument("--v-min", type=float, default=0.01)
    p_sv.add_argument("--v-max", type=float, default=1.0)
    p_sv.add_argument("--v-step", type=float, default=0.01)

    p_sr = sub.add_parser("sweep-r", help="escape time vs turn probability")
    _add_common(p_sr, "sweep_r.csv")
    p_sr.add_argument("--r-min", type=float, default=0.0)
    p_sr.add_argument("--r-max", type=float, default=0.99)
    p_sr.add_argument("--r-step", type=float, default=0.01)

    p_hv = sub.add_parser("heatmap-rv", help="escape-time heatmap over (r, v)")
    _add_common(p_hv, "heatmap_rv.csv")
    p_hv.add_argument("--r-min", type=float, default=0.0)
    p_hv.add_argument("--r-max", type=float, default=0.99)
    p_hv.add_argument("--r-step", type=float, default=0.01)
    p_hv.add_argument("--v-min", type=float, default=0.01)
    p_hv.add_argument("--v-max", type=float, default=1.0)
    p_hv.add_argument("--v-step", type=float, default=0.01)
    p_hv.add_argument("--window", type=int, default=5, help="optimal-line smoothing window")

    p_hr = sub.add_parser("heatmap-rrho", help="escape-time heatmap over (r, rho)")
    _add_common(p_hr, "heatmap_rrho.csv")
    p_hr.add_argument("--r-min", type=float, default=0.0)
    p_hr.add_argument("--r-max", type=float, default=0.99)
    p_hr.add_argument("--r-step", type=float, default=0.01)
    p_hr.add_argument("--rho-min", type=float, default=0.0)
    p_hr.add_argument("--rho-max", type=float, default=0.8)
    p_hr.add_argument("--rho-step", type=float, default=0.01)
    p_hr.add_argument("--window", type=int, default=5, help="optimal-line smoothing window")

    return parser


def _base_config(args: argparse.Namespace, scenario: ScenarioKind) -> InitConfig:
    params = Params(r=args.r, v=args.v, k=args.k, max_steps=args.max_steps)
    return InitConfig(
        scenario=scenario,
        params=params,
        side=args.size,
        rho=args.rho,
        seed=args.seed,
        exit_width=args.exit_width,
    )


def _comment(args: argparse.Namespace, extra: dict | None = None) -> str:
    pairs = {
        "command": args.command,
        "size": args.size,
        "rho": args.rho,
        "r": args.r,
        "v": args.v,
        "k": args.k,
        "exit_width": args.exit_width,
        "max_steps": args.max_steps,
        "runs": args.runs,
        "base_seed": args.seed,
    }
    if extra:
        pairs.update(extra)
    return "# " + " ".join(f"{key}={_fmt(value)}" for key, value in pairs.items())


def _write_csv(path: str, comment: str, header: Sequence[str], rows: list[Sequence]) -> None:
    lines = [comment, ",".join(header)]
    lines.extend(",".join(_fmt(value) for value in row) for row in rows)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def _progress_printer(quiet: bool):
    if quiet:
        return None

    def show(index: int, total: int, key: tuple, stats: RunStats) -> None:
        label = " ".join(
            part.value if isinstance(part, ScenarioKind) else format(part, "g")
            for part in key
        )
        print(
            f"[{index + 1}/{total}] {label}: mean={_fmt(stats.mean_escape_time)} "
            f"std={_fmt(stats.std)} censored={stats.censored}",
            flush=True,
        )

    return show


def _stats_rows(result: SweepResult) -> list[tuple]:
    rows = []
    for key, stats in result.cells.items():
        label = tuple(
            part.value if isinstance(part, ScenarioKind) else part for part in key
        )
        rows.append(label + (stats.mean_escape_time, stats.std, stats.runs, stats.censored))
    return rows


def _optimal_path(path: str) -> str:
    stem, dot, suffix = path.rpartition(".")
    if not dot:
        return path + "_optimal"
    return f"{stem}_optimal.{suffix}"


def _dispatch(args: argparse.Namespace) -> int:
    quiet = args.quiet
    if args.command == "run":
        config = _base_config(args, _SCENARIOS[args.scenario])
        results = escape_times(config, args.runs, jobs=args.jobs)
        rows = [
            (config.seed + i, res.escape_time, res.completed)
            for i, res in enumerate(results)
        ]
        _write_csv(
            args.output,
            _comment(args, {"scenario": args.scenario}),
            ("seed", "escape_time", "completed"),
            rows,
        )
        if not quiet:
            completed = sum(1 for res in results if res.completed)
            print(f"wrote {args.output}: {len(rows)} runs, {completed} completed", flush=True)
        return 0

    if args.command == "sweep-v":
        try:
            scenarios = [_SCENARIOS[name.strip()] for name in args.scenarios.split(",")]
        except KeyError as exc:
            raise ConfigurationError(f"unknown scenario {exc.args[0]!r}") from None
        grid = _grid(args.v_min, args.v_max, args.v_step, "v")
        config = _base_config(args, ScenarioKind.TURN)
        result = sweep_v(
            scenarios, grid, config, args.runs, jobs=args.jobs,
            progress=_progress_printer(quiet),
        )
        extra = {"scenarios": args.scenarios.replace(" ", ""), "v_grid": f"{args.v_min}:{args.v_max}:{args.v_step}"}
        _write_csv(
            args.output,
            _comment(args, extra),
            ("scenario", "v", "mean_escape_time", "std", "runs", "censored"),
            _stats_rows(result),
        )
        if not quiet:
            print(f"wrote {args.output}: {len(result.cells)} points", flush=True)
        return 0

    if args.command == "sweep-r":
        grid = _grid(args.r_min, args.r_max, args.r_step, "r")
        config = _base_config(args, ScenarioKind.TURN)
        result = sweep_r(
            grid, config, args.runs, jobs=args.jobs, progress=_progress_printer(quiet)
        )
        _write_csv(
            args.output,
            _comment(args, {"r_grid": f"{args.r_min}:{args.r_max}:{args.r_step}"}),
            ("r", "mean_escape_time", "std", "runs", "censored"),
            _stats_rows(result),
        )
        if not quiet:
            print(f"wrote {args.output}: {len(result.cells)} points", flush=True)
        return 0

    # heatmap-rv / heatmap-rrho
    col_name = "v" if args.command == "heatmap-rv" else "rho"
    r_grid = _grid(args.r_min, args.r_max, args.r_step, "r")
    if col_name == "v":
        col_grid = _grid(args.v_min, args.v_max, args.v_step, "v")
    else:
        col_grid = _grid(args.rho_min, args.rho_max, args.rho_step, "rho")
    config = _base_config(args, ScenarioKind.TURN)
    result = heatmap(
        r_grid, col_name, col_grid, config, args.runs,
        window=args.window, jobs=args.jobs, progress=_progress_printer(quiet),
    )
    extra = {
        "r_grid": f"{args.r_min}:{args.r_max}:{args.r_step}",
        f"{col_name}_grid": (
            f"{args.v_min}:{args.v_max}:{args.v_step}"
            if col_name == "v"
            else f"{args.rho_min}:{args.rho_max}:{args.rho_step}"
        ),
        "window": args.window,
    }
    rows = [
        (r, col, stats.mean_escape_time, stats.std, stats.censored)
        for (r, col), stats in result.cells.items()
    ]
    _write_csv(
        args.output,
        _comment(args, extra),
        ("r", col_name, "mean_escape_time", "std", "censored"),
        rows,
    )
    raw = dict(argmin_per_column(result))
    optimal_rows = [
        (col, raw[col], smoothed) for col, smoothed in result.optimal_line
    ]
    optimal_path = _optimal_path(args.output)
    _write_csv(
        optimal_path,
        _comment(args, extra),
        (col_name, "r_star_raw", "r_star_smoothed"),
        optimal_rows,
    )
    if not quiet:
        print(
            f"wrote {args.output}: {len(rows)} points; optimal line in {optimal_path}",
            flush=True,
        )
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except (ConfigurationError, PlacementError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

"""Escape time of the three scenarios versus the sideways speed v.

The forward and sideways scenarios never turn and differ only in the
initial body orientation; the turn scenario starts exit-facing and turns
with probability 0.5. Sideways moves execute with probability v, which is
what makes small v painful. Run counts here are scaled down for a quick
look; raise RUNS for smoother curves.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from rectevac import InitConfig, Params, ScenarioKind, sweep_v

RUNS = 20
V_GRID = [round(0.1 * i, 1) for i in range(1, 11)]
SCENARIOS = [ScenarioKind.FORWARD, ScenarioKind.SIDEWAYS, ScenarioKind.TURN]

config = InitConfig(
    scenario=ScenarioKind.TURN, params=Params(r=0.5, v=0.33), side=50, rho=0.5, seed=0
)
result = sweep_v(
    SCENARIOS, V_GRID, config, RUNS,
    progress=lambda i, n, key, stats: print(
        f"[{i + 1}/{n}] {key[0].value} v={key[1]}: mean {stats.mean_escape_time:.0f}"
    ),
)

fig, ax = plt.subplots(figsize=(7, 5))
for scenario, style in zip(SCENARIOS, ("s-", "o-", "^-")):
    means = [result.cells[(scenario, v)].mean_escape_time for v in V_GRID]
    ax.plot(V_GRID, means, style, label=scenario.value)
ax.set_yscale("log")
ax.set_xlabel("sideways speed v")
ax.set_ylabel("mean escape time (steps)")
ax.set_title(f"Escape time vs v ({RUNS} runs per point)")
ax.legend()
ax.grid(alpha=0.3)

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)
fig.savefig(out / "scenario_comparison.png", dpi=150, bbox_inches="tight")
print(f"wrote {out / 'scenario_comparison.png'}")

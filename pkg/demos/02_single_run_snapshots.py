"""Snapshots of one evacuation run.

Fills a small room at half density with exit-facing evacuees that may turn
(r = 0.5, v = 0.33), then draws the crowd at t = 0 and t = 50. Each evacuee
is a 1x2 rectangle; the gap in the bottom wall is the exit.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.patches import Rectangle
import numpy as np

from rectevac import (
    InitConfig,
    Orientation,
    Params,
    ScenarioKind,
    compute_sff,
    place_evacuees,
    step,
)

SIDE = 20

config = InitConfig(
    scenario=ScenarioKind.TURN,
    params=Params(r=0.5, v=0.33),
    side=SIDE,
    rho=0.5,
    seed=4,
)
rng = np.random.default_rng(config.seed)
state = place_evacuees(config, rng)
field = compute_sff(state.geometry)
room = state.geometry


def draw(ax, state, title):
    ax.add_patch(Rectangle((-1, -1), SIDE + 2, SIDE + 2, color="0.15"))
    ax.add_patch(Rectangle((0, 0), SIDE, SIDE, color="white"))
    for cell in room.exit_cells:
        ax.add_patch(Rectangle((cell.col, cell.row), 1, 1, color="tab:green"))
    for evacuee in state.evacuees:
        anchor = evacuee.placement.anchor
        horizontal = evacuee.placement.orientation is Orientation.HORIZONTAL
        width, height = (2, 1) if horizontal else (1, 2)
        color = "tab:blue" if horizontal else "tab:orange"
        ax.add_patch(
            Rectangle((anchor.col, anchor.row), width, height, facecolor=color,
                      edgecolor="black", linewidth=0.5)
        )
    ax.set_xlim(-1, SIDE + 1)
    ax.set_ylim(-1, SIDE + 1)
    ax.set_aspect("equal")
    ax.set_title(title)


fig, axes = plt.subplots(1, 2, figsize=(11, 5.5))
draw(axes[0], state, f"t = 0 ({state.n} evacuees)")

for _ in range(50):
    step(state, field, room, config.params, rng)
draw(axes[1], state, f"t = 50 ({state.n} left, {state.escaped_count} escaped)")
fig.suptitle("Exit-facing bodies in blue, sideways bodies in orange")

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)
fig.savefig(out / "run_snapshots.png", dpi=150, bbox_inches="tight")
print(f"t=50: {state.escaped_count} of {state.initial_count} escaped")
print(f"wrote {out / 'run_snapshots.png'}")

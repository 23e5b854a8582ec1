"""Room geometry and the static floor field.

Builds the standard 50x50 room with its 4-cell exit in the bottom wall and
renders the floor field that steers the evacuees: every enterable cell
holds the negated distance to the nearest exit cell, so brighter means
closer to the way out.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from rectevac import Cell, build_room, compute_sff

room = build_room(50)
field = compute_sff(room)

print(f"room side: {room.side} cells of {room.cell_size_m} m")
print(f"exit columns: {[c.col for c in room.exit_cells]} (row -1)")
print(f"field at the exit: {field.value_at(room.exit_cells[0])}")
print(f"field at the far corner: {field.value_at(Cell(0, 49)):.2f}")

# mask walls so they render black
shown = np.where(room.wall_mask, np.nan, field.values)

fig, ax = plt.subplots(figsize=(6, 6))
image = ax.imshow(shown, origin="lower", extent=(-1.5, 50.5, -1.5, 50.5), cmap="viridis")
ax.set_title("Static floor field (brighter = closer to the exit)")
ax.set_xlabel("column")
ax.set_ylabel("row")
fig.colorbar(image, ax=ax, label="field value")

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)
fig.savefig(out / "floor_field.png", dpi=150, bbox_inches="tight")
print(f"wrote {out / 'floor_field.png'}")

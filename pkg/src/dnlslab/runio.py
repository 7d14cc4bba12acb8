"""Serialization of run results: CSV with a fixed 17-significant-digit float
format, JSON run summaries, trajectory frames, and a generated plot script."""

from __future__ import annotations

import csv
import hashlib
import json
import os

import numpy as np

from .dynamics import Trajectory


def fmt_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def write_csv(path: str, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt_value(v) for v in row])


def content_hash(doc: dict) -> str:
    """Content hash of the canonical config document."""
    canonical = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def write_summary(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_frames(path: str, traj: Trajectory) -> None:
    """Trajectory frames as a compressed npz (times, stacked values, L)."""
    times = np.array([t for t, _ in traj.frames])
    values = np.stack([f.values for _, f in traj.frames])
    np.savez_compressed(path, t=times, values=values,
                        L=traj.grid.L, N=traj.grid.N)


PLOT_SCRIPT = """\
#!/usr/bin/env python3
\"\"\"Generated plotting script: relative drift of each conserved column.\"\"\"
import csv
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "conserved.csv"
with open(path) as fh:
    rows = list(csv.DictReader(fh))
t = [float(r["t"]) for r in rows]
fig, ax = plt.subplots(figsize=(7, 4))
for col in ("M", "H", "E", "P", "mu", "Ecal"):
    x0 = float(rows[0][col])
    scale = abs(x0) if x0 != 0 else 1.0
    ax.plot(t, [abs(float(r[col]) - x0) / scale for r in rows], label=col)
ax.set_yscale("log")
ax.set_xlabel("t")
ax.set_ylabel("relative drift")
ax.legend()
fig.tight_layout()
fig.savefig(path.rsplit(".", 1)[0] + "_drift.png", dpi=150)
"""


def write_plot_script(out_dir: str) -> str:
    path = os.path.join(out_dir, "plot_drift.py")
    with open(path, "w") as fh:
        fh.write(PLOT_SCRIPT)
    return path

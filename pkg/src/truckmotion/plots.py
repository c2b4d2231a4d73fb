"""Figure rendering for analysis reports (headless matplotlib backend).

These renderers are used by the CLI report path; the analysis modules stay
free of any drawing so library consumers can bring their own visualization.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .area import HeatmapLayer
from .events import EventStack, EventType, segment_trajectory
from .kinematics import KinematicFrame

__all__ = [
    "EVENT_COLORS",
    "render_trajectory",
    "render_heatmap",
    "render_event_timeline",
    "render_sweep",
]

EVENT_COLORS = {
    EventType.STANDSTILL: "#d62728",
    EventType.MANEUVERING: "#ff7f0e",
    EventType.DRIVING: "#2ca02c",
    EventType.HARSH_BRAKING: "#9467bd",
    EventType.STRONG_ACCELERATION: "#1f77b4",
    EventType.FORK_MOTION: "#8c564b",
}


def render_trajectory(polylines: Sequence[Sequence[tuple[float, float, float]]],
                      path: str, title: str = "Trajectory") -> None:
    fig, ax = plt.subplots(figsize=(7, 6))
    for line in polylines:
        pts = np.asarray(line)
        if len(pts):
            ax.plot(pts[:, 1], pts[:, 2], lw=0.8, color="#1f77b4")
    ax.set_xlabel("x [mm]")
    ax.set_ylabel("y [mm]")
    ax.set_title(title)
    ax.set_aspect("equal", adjustable="datalim")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_heatmap(layer: HeatmapLayer, path: str) -> None:
    g = layer.grid
    extent = (g.origin_x, g.origin_x + g.cols * g.sector_size,
              g.origin_y, g.origin_y + g.rows * g.sector_size)
    fig, ax = plt.subplots(figsize=(7, 6))
    im = ax.imshow(np.asarray(layer.values), origin="lower", extent=extent,
                   aspect="equal", cmap="magma")
    unit = {"dwell_time": "s", "max_speed": "mm/s", "max_accel": "mm/s²"}[layer.metric]
    fig.colorbar(im, ax=ax, label=f"{layer.metric} [{unit}]")
    ax.set_xlabel("x [mm]")
    ax.set_ylabel("y [mm]")
    ax.set_title(f"{layer.metric} per {g.sector_size:g} mm sector")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_event_timeline(frames: Sequence[KinematicFrame], stack: EventStack,
                          path: str) -> None:
    """Speed and acceleration traces with the detected events colored in."""
    t = np.array([f.t for f in frames])
    speed = np.array([f.speed for f in frames])
    accel = np.array([f.accel for f in frames])
    segments, overlay = segment_trajectory(frames, stack)

    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(10, 6), sharex=True)
    for label, (i0, i1) in segments:
        color = EVENT_COLORS.get(label, "#bbbbbb") if label else "#bbbbbb"
        ax1.plot(t[i0:i1], speed[i0:i1], color=color, lw=1.2)
    for _, (i0, i1) in overlay:
        ax1.axvspan(t[i0], t[i1 - 1], color=EVENT_COLORS[EventType.FORK_MOTION], alpha=0.15)
    ax1.set_ylabel("speed [mm/s]")
    handles = [plt.Line2D([0], [0], color=c, lw=3) for c in EVENT_COLORS.values()]
    ax1.legend(handles, [k.value for k in EVENT_COLORS], fontsize=7, ncol=3, loc="upper right")
    ax2.plot(t, accel, color="#333333", lw=0.8)
    ax2.set_ylabel("accel [mm/s²]")
    ax2.set_xlabel("t [s]")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_sweep(rows: Sequence[dict], path: str) -> None:
    """Mean resulting speed vs scatter, one line per (filter, rate)."""
    fig, ax = plt.subplots(figsize=(8, 5))
    styles = {"butterworth": "-", "fir": "--", "savgol": ":"}
    filters = sorted({r["filter"] for r in rows})
    rates = sorted({r["rate_hz"] for r in rows})
    cmap = plt.get_cmap("viridis")
    for fi, name in enumerate(filters):
        for ri, rate in enumerate(rates):
            pts = sorted(
                ((r["scatter_mm"], r["mean_speed_mm_s"]) for r in rows
                 if r["filter"] == name and r["rate_hz"] == rate)
            )
            if not pts:
                continue
            xs, ys = zip(*pts)
            ax.plot(xs, ys, styles.get(name, "-"),
                    color=cmap(ri / max(len(rates) - 1, 1)),
                    label=f"{name} @ {rate:g} Hz", lw=1.2)
    ax.set_xlabel("scatter [mm]")
    ax.set_ylabel("mean resulting speed [mm/s]")
    ax.legend(fontsize=6, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)

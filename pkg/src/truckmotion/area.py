"""Location-specific intensity maps and trajectory extraction.

Frames are binned into a 2-D grid of square sectors (half-open cells, points
on an edge belong to the higher-index sector).  Dwell time accumulates one
frame interval per in-window frame; the max metrics keep per-sector maxima of
speed and |acceleration|.  Frames outside the grid are counted, never silently
dropped, so dwell conservation can be checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .kinematics import KinematicFrame

__all__ = ["GridSpec", "HeatmapLayer", "build_heatmap", "extract_trajectory",
           "DEFAULT_SECTOR_MM", "METRICS"]

DEFAULT_SECTOR_MM = 500.0
METRICS = ("dwell_time", "max_speed", "max_accel")


@dataclass(frozen=True)
class GridSpec:
    """Placement of the sector grid: origin corner, square size, cell counts."""

    origin_x: float
    origin_y: float
    sector_size: float
    cols: int
    rows: int

    def __post_init__(self) -> None:
        if self.sector_size <= 0:
            raise ValueError("sector_size must be > 0")
        if self.cols < 1 or self.rows < 1:
            raise ValueError("grid needs at least one column and row")

    @classmethod
    def covering(cls, frames: Sequence[KinematicFrame], sector_size: float) -> "GridSpec":
        """Smallest grid with sector-aligned origin covering all frames."""
        xs = [f.x for f in frames]
        ys = [f.y for f in frames]
        ox = math.floor(min(xs) / sector_size) * sector_size
        oy = math.floor(min(ys) / sector_size) * sector_size
        cols = max(1, int(math.floor((max(xs) - ox) / sector_size)) + 1)
        rows = max(1, int(math.floor((max(ys) - oy) / sector_size)) + 1)
        return cls(ox, oy, sector_size, cols, rows)

    def sector_of(self, x: float, y: float) -> tuple[int, int] | None:
        """(row, col) containing the point, or None when outside the grid."""
        col = math.floor((x - self.origin_x) / self.sector_size)
        row = math.floor((y - self.origin_y) / self.sector_size)
        if 0 <= col < self.cols and 0 <= row < self.rows:
            return int(row), int(col)
        return None

    def to_dict(self) -> dict:
        return {
            "origin_x": self.origin_x,
            "origin_y": self.origin_y,
            "sector_size": self.sector_size,
            "cols": self.cols,
            "rows": self.rows,
        }


@dataclass
class HeatmapLayer:
    """One metric evaluated per sector over a time window."""

    metric: str
    grid: GridSpec
    values: np.ndarray  # rows x cols
    window: tuple[float, float]
    out_of_grid_count: int = 0
    out_of_grid_dwell: float = 0.0


def build_heatmap(frames: Sequence[KinematicFrame], grid: GridSpec, metric: str,
                  window: tuple[float, float] | None = None) -> HeatmapLayer:
    """Aggregate one metric over the grid for frames with window[0] <= t < window[1]."""
    if metric not in METRICS:
        raise ValueError(f"unknown heatmap metric {metric!r}; expected one of {METRICS}")
    if not frames:
        raise ValueError("build_heatmap needs frames")
    if len(frames) > 1:
        dt = (frames[-1].t - frames[0].t) / (len(frames) - 1)
    else:
        dt = 0.0
    if window is None:
        window = (frames[0].t, frames[-1].t + dt)
    w0, w1 = float(window[0]), float(window[1])
    values = np.zeros((grid.rows, grid.cols))
    outside = 0
    outside_dwell = 0.0
    seen = 0
    for f in frames:
        if not (w0 <= f.t < w1):
            continue
        seen += 1
        cell = grid.sector_of(f.x, f.y)
        if cell is None:
            outside += 1
            outside_dwell += dt
            continue
        r, c = cell
        if metric == "dwell_time":
            values[r, c] += dt
        elif metric == "max_speed":
            values[r, c] = max(values[r, c], f.speed)
        else:
            values[r, c] = max(values[r, c], abs(f.accel))
    if seen == 0:
        raise ValueError(f"no frames inside window [{w0}, {w1})")
    return HeatmapLayer(metric=metric, grid=grid, values=values, window=(w0, w1),
                        out_of_grid_count=outside, out_of_grid_dwell=outside_dwell)


def extract_trajectory(frames: Sequence[KinematicFrame],
                       window: tuple[float, float] | None = None
                       ) -> list[list[tuple[float, float, float]]]:
    """Chronological (t, x, y) polylines inside the window, split at ingest gaps."""
    if window is None and frames:
        if len(frames) > 1:
            dt = (frames[-1].t - frames[0].t) / (len(frames) - 1)
        else:
            dt = 0.0
        window = (frames[0].t, frames[-1].t + dt)
    polylines: list[list[tuple[float, float, float]]] = []
    current: list[tuple[float, float, float]] = []
    for f in frames:
        if window is not None and not (window[0] <= f.t < window[1]):
            continue
        if f.in_gap:
            if current:
                polylines.append(current)
                current = []
            continue
        current.append((f.t, f.x, f.y))
    if current:
        polylines.append(current)
    return polylines

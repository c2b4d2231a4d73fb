"""Canonical wire/file formats shared by the CLI report path and the HTTP API.

Both surfaces must emit byte-identical artifacts for the same analysis, so
every serializer lives here and nowhere else.  JSON is compact with a fixed
field order; CSV uses fixed decimal formatting.
"""

from __future__ import annotations

import json
from typing import Sequence

import numpy as np

from .area import HeatmapLayer
from .events import EventStack, EventType, MotionEvent
from .kinematics import KinematicFrame
from .kpi import KpiReport

__all__ = [
    "dumps",
    "frames_to_csv",
    "frames_to_json",
    "frames_from_csv",
    "event_to_dict",
    "stack_to_jsonl",
    "stack_from_jsonl",
    "kpi_to_json",
    "heatmap_to_json",
    "trajectory_to_jsonl",
    "sweep_to_csv",
]

_FRAME_HEADER = "t,x,y,z,vx,vy,speed,accel,fork_v,in_gap"


def dumps(obj) -> str:
    """Canonical JSON: compact separators, no NaN, insertion-ordered keys."""
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def _num(v: float) -> str:
    return format(v, ".6f")


def frames_to_csv(frames: Sequence[KinematicFrame]) -> str:
    lines = [_FRAME_HEADER]
    for f in frames:
        fork = _num(f.fork_v) if f.fork_v is not None else ""
        lines.append(
            f"{_num(f.t)},{_num(f.x)},{_num(f.y)},{_num(f.z)},{_num(f.vx)},{_num(f.vy)},"
            f"{_num(f.speed)},{_num(f.accel)},{fork},{int(f.in_gap)}"
        )
    return "\n".join(lines) + "\n"


def frame_to_dict(f: KinematicFrame) -> dict:
    d = {
        "t": f.t, "x": f.x, "y": f.y, "z": f.z,
        "vx": f.vx, "vy": f.vy, "speed": f.speed, "accel": f.accel,
        "in_gap": f.in_gap,
    }
    if f.fork_v is not None:
        d["fork_v"] = f.fork_v
    return d


def frames_to_json(frames: Sequence[KinematicFrame]) -> str:
    return dumps([frame_to_dict(f) for f in frames])


def frames_from_csv(text: str) -> list[KinematicFrame]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != _FRAME_HEADER:
        raise ValueError("not a kinematic frame CSV")
    frames = []
    for ln in lines[1:]:
        parts = ln.split(",")
        frames.append(KinematicFrame(
            t=float(parts[0]), x=float(parts[1]), y=float(parts[2]), z=float(parts[3]),
            vx=float(parts[4]), vy=float(parts[5]), speed=float(parts[6]),
            accel=float(parts[7]),
            fork_v=float(parts[8]) if parts[8] != "" else None,
            in_gap=parts[9] == "1",
        ))
    return frames


def event_to_dict(ev: MotionEvent) -> dict:
    d = {
        "type": ev.type.value,
        "start_t": ev.start_t,
        "end_t": ev.end_t,
        "start_idx": ev.start_idx,
        "end_idx": ev.end_idx,
        "mean_speed": ev.mean_speed,
        "peak_accel": ev.peak_accel,
        "distance": ev.distance,
    }
    if ev.direction is not None:
        d["direction"] = ev.direction
    return d


def stack_to_jsonl(stack: EventStack) -> str:
    return "".join(dumps(event_to_dict(ev)) + "\n" for ev in stack)


def stack_from_jsonl(text: str) -> EventStack:
    events = []
    for ln in text.splitlines():
        if not ln.strip():
            continue
        d = json.loads(ln)
        events.append(MotionEvent(
            type=EventType(d["type"]),
            start_t=d["start_t"], end_t=d["end_t"],
            start_idx=d["start_idx"], end_idx=d["end_idx"],
            mean_speed=d["mean_speed"], peak_accel=d["peak_accel"],
            distance=d["distance"], direction=d.get("direction"),
        ))
    return EventStack(events)


def kpi_to_json(report: KpiReport) -> str:
    return dumps(report.to_dict())


def heatmap_to_json(layer: HeatmapLayer) -> str:
    return dumps({
        "metric": layer.metric,
        "grid": layer.grid.to_dict(),
        "window": list(layer.window),
        "values": [[float(v) for v in row] for row in np.asarray(layer.values)],
        "out_of_grid_count": layer.out_of_grid_count,
        "out_of_grid_dwell": layer.out_of_grid_dwell,
    })


def trajectory_to_jsonl(polylines: Sequence[Sequence[tuple[float, float, float]]]) -> str:
    return "".join(
        dumps({"points": [[p[0], p[1], p[2]] for p in line]}) + "\n"
        for line in polylines
    )


def sweep_to_csv(rows: Sequence[dict]) -> str:
    lines = ["rate_hz,scatter_mm,filter,mean_speed_mm_s"]
    for r in rows:
        lines.append(
            f"{format(r['rate_hz'], 'g')},{format(r['scatter_mm'], 'g')},"
            f"{r['filter']},{_num(r['mean_speed_mm_s'])}"
        )
    return "\n".join(lines) + "\n"

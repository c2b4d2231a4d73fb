"""Transport KPIs aggregated from an event stack over an observation window.

Equipment utilization follows the source definition literally as the ratio of
standstill time to the window length; because the name suggests the opposite,
the complementary ``activity_ratio`` is exposed alongside it.  Events that
straddle the window are clipped to it so the KPIs stay additive over
event-aligned window splits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .events import EventStack, EventType, MotionEvent
from .kinematics import KinematicFrame

__all__ = ["KpiReport", "compute_kpis", "DRIVING_LIKE"]

# driving, braking and accelerating all count as motion for velocity/distance
DRIVING_LIKE = (EventType.DRIVING, EventType.HARSH_BRAKING, EventType.STRONG_ACCELERATION)


@dataclass(frozen=True)
class KpiReport:
    total_driving_time: float
    total_standstill_time: float
    equipment_utilization: float
    average_driving_velocity: float
    simultaneous_loading_and_driving: float
    total_driving_distance: float
    window: tuple[float, float]
    no_driving: bool = False
    activity_ratio: float = 0.0

    def to_dict(self) -> dict:
        return {
            "total_driving_time": self.total_driving_time,
            "total_standstill_time": self.total_standstill_time,
            "equipment_utilization": self.equipment_utilization,
            "average_driving_velocity": self.average_driving_velocity,
            "simultaneous_loading_and_driving": self.simultaneous_loading_and_driving,
            "total_driving_distance": self.total_driving_distance,
            "window": list(self.window),
            "no_driving": self.no_driving,
            "activity_ratio": self.activity_ratio,
        }


def _clipped_span(ev: MotionEvent, window: tuple[float, float]) -> float:
    lo = max(ev.start_t, window[0])
    hi = min(ev.end_t, window[1])
    return max(0.0, hi - lo)


def _overlap(a0: float, a1: float, b0: float, b1: float) -> float:
    return max(0.0, min(a1, b1) - max(a0, b0))


def compute_kpis(stack: EventStack, frames: Sequence[KinematicFrame],
                 window: tuple[float, float] | None = None) -> KpiReport:
    """Aggregate the six transport KPIs for [window start, window end]."""
    if not frames:
        raise ValueError("compute_kpis needs frames")
    if window is None:
        window = (frames[0].t, frames[-1].t)
    w0, w1 = float(window[0]), float(window[1])
    if not w1 > w0:
        raise ValueError("empty KPI window")
    length = w1 - w0
    if len(frames) > 1:
        dt = (frames[-1].t - frames[0].t) / (len(frames) - 1)
    else:
        dt = 0.0

    driving_time = sum(_clipped_span(e, (w0, w1)) for e in stack.by_type(EventType.DRIVING))
    standstill_time = sum(_clipped_span(e, (w0, w1)) for e in stack.by_type(EventType.STANDSTILL))

    t = np.array([f.t for f in frames])
    speed = np.array([f.speed for f in frames])
    pooled = np.zeros(len(frames), dtype=bool)
    for ev in stack.events:
        if ev.type in DRIVING_LIKE and _clipped_span(ev, (w0, w1)) > 0:
            idx = slice(ev.start_idx, ev.end_idx)
            pooled[idx] |= (t[idx] >= w0) & (t[idx] < w1)

    if pooled.any():
        avg_velocity = float(speed[pooled].mean())
        distance = float(speed[pooled].sum() * dt)
        no_driving = False
    else:
        avg_velocity = 0.0
        distance = 0.0
        no_driving = True

    simultaneous = 0.0
    fork_events = stack.by_type(EventType.FORK_MOTION)
    for drv in (e for e in stack.exclusive() if e.type in DRIVING_LIKE):
        d0, d1 = max(drv.start_t, w0), min(drv.end_t, w1)
        if d1 <= d0:
            continue
        for fk in fork_events:
            simultaneous += _overlap(d0, d1, fk.start_t, fk.end_t)

    utilization = min(1.0, standstill_time / length)
    return KpiReport(
        total_driving_time=driving_time,
        total_standstill_time=standstill_time,
        equipment_utilization=utilization,
        average_driving_velocity=avg_velocity,
        simultaneous_loading_and_driving=simultaneous,
        total_driving_distance=distance,
        window=(w0, w1),
        no_driving=no_driving,
        activity_ratio=1.0 - utilization,
    )

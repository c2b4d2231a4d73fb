"""Motion-event detection: per-type threshold segmentation over kinematic frames.

Event types are evaluated in a configurable priority order.  For each type the
frames satisfying its threshold condition are merged into candidate segments,
segments shorter than the type's minimum duration are deleted, and the
survivors are trimmed against everything already on the stack so that the five
exclusive types never overlap.  Fork motion is computed independently from the
fork velocity channel and may overlap any other event.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .kinematics import KinematicFrame, frames_to_arrays

__all__ = [
    "EventType",
    "EXCLUSIVE_TYPES",
    "EventLimits",
    "MotionEvent",
    "EventStack",
    "default_limits",
    "detect_events",
    "segment_trajectory",
]


class EventType(str, Enum):
    STANDSTILL = "standstill"
    MANEUVERING = "maneuvering"
    DRIVING = "driving"
    HARSH_BRAKING = "harsh_braking"
    STRONG_ACCELERATION = "strong_acceleration"
    FORK_MOTION = "fork_motion"


EXCLUSIVE_TYPES = (
    EventType.STANDSTILL,
    EventType.MANEUVERING,
    EventType.DRIVING,
    EventType.HARSH_BRAKING,
    EventType.STRONG_ACCELERATION,
)


@dataclass(frozen=True)
class EventLimits:
    """Threshold values, minimum durations and the evaluation order.

    Speeds are mm/s, accelerations mm/s², durations seconds.  The standstill
    speed bound must stay below the maneuvering bound, which must not exceed
    the driving bound, so the speed classes stay disjoint.
    """

    standstill_speed_below: float = 100.0
    standstill_min_duration: float = 2.0
    maneuvering_speed_below: float = 500.0
    maneuvering_min_duration: float = 1.5
    driving_speed_at_least: float = 500.0
    driving_min_duration: float = 1.0
    braking_accel_at_most: float = -1500.0
    braking_min_duration: float = 0.3
    acceleration_accel_at_least: float = 1500.0
    acceleration_min_duration: float = 0.3
    fork_speed_at_least: float = 50.0
    fork_min_duration: float = 0.5
    order: tuple[EventType, ...] = (
        EventType.HARSH_BRAKING,
        EventType.STRONG_ACCELERATION,
        EventType.STANDSTILL,
        EventType.MANEUVERING,
        EventType.DRIVING,
    )

    def __post_init__(self) -> None:
        if not self.standstill_speed_below < self.maneuvering_speed_below:
            raise ValueError("standstill speed bound must be below the maneuvering bound")
        if not self.maneuvering_speed_below <= self.driving_speed_at_least:
            raise ValueError("maneuvering speed bound must not exceed the driving bound")
        for name in ("standstill", "maneuvering", "driving", "braking", "acceleration", "fork"):
            if getattr(self, f"{name}_min_duration") < 0:
                raise ValueError(f"{name}_min_duration must be >= 0")
        extra = set(self.order) - set(EXCLUSIVE_TYPES)
        if extra:
            raise ValueError(f"order may only contain exclusive types, got {sorted(extra)}")

    def min_duration(self, kind: EventType) -> float:
        return {
            EventType.STANDSTILL: self.standstill_min_duration,
            EventType.MANEUVERING: self.maneuvering_min_duration,
            EventType.DRIVING: self.driving_min_duration,
            EventType.HARSH_BRAKING: self.braking_min_duration,
            EventType.STRONG_ACCELERATION: self.acceleration_min_duration,
            EventType.FORK_MOTION: self.fork_min_duration,
        }[kind]

    def to_dict(self) -> dict:
        data = {
            f.name: getattr(self, f.name)
            for f in self.__dataclass_fields__.values()  # type: ignore[attr-defined]
            if f.name != "order"
        }
        data["order"] = [t.value for t in self.order]
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "EventLimits":
        kwargs = {k: v for k, v in data.items() if k in cls.__dataclass_fields__ and k != "order"}
        if "order" in data:
            kwargs["order"] = tuple(EventType(v) for v in data["order"])
        return cls(**kwargs)


def default_limits() -> EventLimits:
    return EventLimits()


@dataclass(frozen=True)
class MotionEvent:
    """A typed time segment over frames [start_idx, end_idx) with summary stats."""

    type: EventType
    start_t: float
    end_t: float
    start_idx: int
    end_idx: int
    mean_speed: float
    peak_accel: float
    distance: float
    direction: str | None = None  # lift/lower, fork events only

    @property
    def duration(self) -> float:
        return self.end_t - self.start_t


@dataclass
class EventStack:
    """All detected events, globally sorted by start time."""

    events: list[MotionEvent] = field(default_factory=list)

    def by_type(self, kind: EventType) -> list[MotionEvent]:
        return [e for e in self.events if e.type == kind]

    def exclusive(self) -> list[MotionEvent]:
        return [e for e in self.events if e.type != EventType.FORK_MOTION]

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Maximal half-open [start, end) runs of True."""
    if not mask.any():
        return []
    padded = np.concatenate([[False], mask, [False]])
    edges = np.flatnonzero(np.diff(padded.astype(np.int8)))
    return list(zip(edges[::2], edges[1::2]))


def _min_frames(min_duration: float, rate: float) -> int:
    # duration of an n-frame segment is (n-1)/rate; exact index arithmetic
    # avoids float-equality surprises at the threshold; two frames minimum so
    # every event has start_t < end_t
    return max(2, int(math.ceil(min_duration * rate - 1e-9)) + 1)


def _make_event(kind: EventType, i0: int, i1: int, arrays: dict, rate: float,
                direction: str | None = None) -> MotionEvent:
    speed = arrays["speed"][i0:i1]
    accel = arrays["accel"][i0:i1]
    peak = float(accel[np.argmax(np.abs(accel))]) if len(accel) else 0.0
    return MotionEvent(
        type=kind,
        start_t=float(arrays["t"][i0]),
        end_t=float(arrays["t"][i1 - 1]),
        start_idx=int(i0),
        end_idx=int(i1),
        mean_speed=float(speed.mean()),
        peak_accel=peak,
        distance=float(speed.sum() / rate),
        direction=direction,
    )


def _condition(kind: EventType, arrays: dict, limits: EventLimits) -> np.ndarray:
    speed = arrays["speed"]
    accel = arrays["accel"]
    if kind is EventType.STANDSTILL:
        return speed < limits.standstill_speed_below
    if kind is EventType.MANEUVERING:
        return speed < limits.maneuvering_speed_below
    if kind is EventType.DRIVING:
        return speed >= limits.driving_speed_at_least
    if kind is EventType.HARSH_BRAKING:
        return accel <= limits.braking_accel_at_most
    if kind is EventType.STRONG_ACCELERATION:
        return accel >= limits.acceleration_accel_at_least
    raise ValueError(f"no threshold condition for {kind}")


def detect_events(frames: Sequence[KinematicFrame], limits: EventLimits | None = None) -> EventStack:
    """Run the detection scheme over uniform frames and return the sorted stack."""
    if not frames:
        raise ValueError("detect_events needs at least one frame")
    limits = limits or default_limits()
    arrays = frames_to_arrays(frames)
    t = arrays["t"]
    if len(frames) > 1:
        rate = (len(frames) - 1) / (t[-1] - t[0])
    else:
        rate = 1.0
    usable = ~arrays["in_gap"]
    claimed = np.zeros(len(frames), dtype=bool)
    events: list[MotionEvent] = []

    for kind in limits.order:
        mask = _condition(kind, arrays, limits) & usable
        min_n = _min_frames(limits.min_duration(kind), rate)
        for i0, i1 in _runs(mask):
            if i1 - i0 < min_n:
                continue  # shorter than the type's minimum duration
            # trim against already claimed frames; re-check surviving pieces
            free = ~claimed[i0:i1]
            for j0, j1 in _runs(free):
                if j1 - j0 < min_n:
                    continue
                a, b = i0 + j0, i0 + j1
                claimed[a:b] = True
                events.append(_make_event(kind, a, b, arrays, rate))

    if "fork_v" in arrays:
        fork_v = arrays["fork_v"]
        min_n = _min_frames(limits.fork_min_duration, rate)
        for direction, mask in (("lift", fork_v >= limits.fork_speed_at_least),
                                ("lower", fork_v <= -limits.fork_speed_at_least)):
            for i0, i1 in _runs(mask & usable):
                if i1 - i0 < min_n:
                    continue
                events.append(_make_event(EventType.FORK_MOTION, i0, i1, arrays, rate,
                                          direction=direction))

    events.sort(key=lambda e: (e.start_t, e.type is EventType.FORK_MOTION, e.type.value))
    return EventStack(events)


def segment_trajectory(frames: Sequence[KinematicFrame], stack: EventStack
                       ) -> tuple[list[tuple[EventType | None, tuple[int, int]]],
                                  list[tuple[str, tuple[int, int]]]]:
    """Partition the frame range into maximal runs labeled by the covering event.

    Returns the exclusive-type partition plus the fork-motion overlay track.
    Frames not covered by any exclusive event are labeled None.
    """
    n = len(frames)
    labels: list[EventType | None] = [None] * n
    for ev in stack.exclusive():
        if ev.end_idx > n or ev.start_idx < 0:
            raise ValueError("event stack does not match the given frames")
        for i in range(ev.start_idx, ev.end_idx):
            labels[i] = ev.type
    segments: list[tuple[EventType | None, tuple[int, int]]] = []
    start = 0
    for i in range(1, n + 1):
        if i == n or labels[i] != labels[start]:
            segments.append((labels[start], (start, i)))
            start = i
    overlay = [(ev.direction or "", (ev.start_idx, ev.end_idx))
               for ev in stack.by_type(EventType.FORK_MOTION)]
    return segments, overlay

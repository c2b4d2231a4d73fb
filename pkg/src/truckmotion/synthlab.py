"""Synthetic benchmark lab: static-signal manipulation and scripted movement runs.

The static side emulates a motion-capture rig recording a parked vehicle,
degrades the log in update frequency and scatter, and sweeps the processing
chain over the degradation grid.  The movement side drives a scripted
trapezoidal-speed trajectory through a small warehouse layout and returns the
exact phase-derived event stack next to the noisy samples, so detection
quality can be scored against ground truth.

Noise convention: a scatter/noise std names the standard deviation of the
isotropic 3-D displacement magnitude; each axis receives std/sqrt(3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .events import EventStack, EventType, MotionEvent
from .filters import FilterConfig
from .ingest import PositionSample
from .kinematics import ChainConfig, process_chain

__all__ = [
    "ManipulationSpec",
    "Phase",
    "MovementScript",
    "DetectionQuality",
    "TypeQuality",
    "gen_static",
    "manipulate",
    "run_static_sweep",
    "sweep_filter_configs",
    "gen_movement",
    "ideal_kinematics",
    "default_movement_script",
    "evaluate_detection",
]

AXIS_SCALE = 1.0 / math.sqrt(3.0)  # magnitude std -> per-axis std


@dataclass(frozen=True)
class ManipulationSpec:
    """Degradation of a recorded log: decimation to target_rate, added scatter."""

    target_rate: float
    scatter_std: float = 0.0
    seed: "int | np.random.SeedSequence | None" = 0

    def __post_init__(self) -> None:
        if self.target_rate <= 0:
            raise ValueError("target_rate must be > 0")
        if self.scatter_std < 0:
            raise ValueError("scatter_std must be >= 0")


def _noise(rng: np.random.Generator, n: int, std: float) -> np.ndarray:
    if std == 0:
        return np.zeros((n, 3))
    return rng.normal(0.0, std * AXIS_SCALE, (n, 3))


def gen_static(duration: float, rate: float, sensor_noise_std: float = 2.0,
               seed=0, origin: tuple[float, float, float] = (5000.0, 5000.0, 0.0)
               ) -> list[PositionSample]:
    """Samples of a parked vehicle: a fixed point plus isotropic sensor noise."""
    if duration <= 0 or rate <= 0:
        raise ValueError("duration and rate must be > 0")
    n = int(round(duration * rate))
    rng = np.random.default_rng(seed)
    noise = _noise(rng, n, sensor_noise_std)
    return [
        PositionSample(
            t=k / rate,
            x=float(origin[0] + noise[k, 0]),
            y=float(origin[1] + noise[k, 1]),
            z=float(origin[2] + noise[k, 2]),
        )
        for k in range(n)
    ]


def source_rate_of(samples: Sequence[PositionSample]) -> float:
    if len(samples) < 2:
        raise ValueError("need at least 2 samples to infer a rate")
    return (len(samples) - 1) / (samples[-1].t - samples[0].t)


def manipulate(samples: Sequence[PositionSample], spec: ManipulationSpec) -> list[PositionSample]:
    """Decimate to the target update rate, then add position scatter."""
    src_rate = source_rate_of(samples)
    if spec.target_rate > src_rate * (1 + 1e-9):
        raise ValueError(f"target_rate {spec.target_rate} exceeds source rate {src_rate:.3f}")
    k = max(1, int(round(src_rate / spec.target_rate)))
    kept = list(samples[::k])
    rng = np.random.default_rng(spec.seed)
    noise = _noise(rng, len(kept), spec.scatter_std)
    return [
        replace(s, x=float(s.x + noise[i, 0]), y=float(s.y + noise[i, 1]),
                z=float(s.z + noise[i, 2]))
        for i, s in enumerate(kept)
    ]


def sweep_filter_configs() -> list[FilterConfig]:
    """The three compared filter families at their default operating points."""
    return [
        FilterConfig(kind="butterworth", cutoff_hz=1.0, order=1, mode="zero_phase"),
        FilterConfig(kind="fir", cutoff_hz=1.0, window_seconds=0.5, mode="zero_phase"),
        FilterConfig(kind="savgol", window_seconds=0.5, poly_degree=2, mode="zero_phase"),
    ]


def run_static_sweep(rates: Sequence[float], scatters: Sequence[float],
                     filters: Sequence[FilterConfig] | None = None, seed: int = 0,
                     duration: float = 60.0, source_rate: float = 100.0,
                     rig_noise_std: float = 2.0) -> list[dict]:
    """Mean resulting speed per (update rate, scatter, filter) cell.

    Each cell runs the chain at the cell's native update rate, with window
    lengths sized at that rate, mirroring a sensor that only delivers this
    frequency.  Cells are seeded independently, so the table is deterministic
    regardless of evaluation order, and all filters within a cell see the same
    degraded input.
    """
    if not rates or not scatters:
        raise ValueError("rates and scatters must be non-empty")
    filters = list(filters) if filters is not None else sweep_filter_configs()
    rows = []
    for i, rate in enumerate(rates):
        for j, scatter in enumerate(scatters):
            base = gen_static(duration, source_rate, rig_noise_std,
                              seed=np.random.SeedSequence([seed, i, 7919]))
            spec = ManipulationSpec(target_rate=rate, scatter_std=scatter,
                                    seed=np.random.SeedSequence([seed, i, j]))
            degraded = manipulate(base, spec)
            for cfg in filters:
                chain = ChainConfig(resample_rate=rate, filter_pos=cfg,
                                    filter_vel=cfg, filter_acc=cfg)
                frames = process_chain(degraded, chain)
                mean_speed = float(np.mean([f.speed for f in frames]))
                rows.append({
                    "rate_hz": float(rate),
                    "scatter_mm": float(scatter),
                    "filter": cfg.kind,
                    "mean_speed_mm_s": mean_speed,
                })
    return rows


# ---------------------------------------------------------------------------
# scripted movement scenarios


@dataclass(frozen=True)
class Phase:
    """One script phase: constant acceleration along a fixed heading.

    ``label`` is the ground-truth event type the phase belongs to (None for
    unclassified filler).  ``fork_rate`` lifts (positive) or lowers (negative)
    the fork during the phase.
    """

    label: EventType | None
    duration: float
    accel: float = 0.0
    heading: tuple[float, float] | None = None
    fork_rate: float = 0.0

    def __post_init__(self) -> None:
        if self.duration <= 0:
            raise ValueError("phase duration must be > 0")


@dataclass(frozen=True)
class MovementScript:
    """Ordered contiguous phases plus named layout anchor points (mm)."""

    phases: tuple[Phase, ...]
    anchors: dict[str, tuple[float, float]] = field(default_factory=dict)
    start: tuple[float, float] = (0.0, 0.0)
    initial_fork_z: float = 0.0

    def __post_init__(self) -> None:
        if not self.phases:
            raise ValueError("script needs at least one phase")
        v = 0.0
        for p in self.phases:
            v_end = v + p.accel * p.duration
            if v_end < -1e-9 or v < -1e-9:
                raise ValueError("script speed must stay non-negative")
            v = max(v_end, 0.0)

    @property
    def duration(self) -> float:
        return sum(p.duration for p in self.phases)


def default_movement_script() -> MovementScript:
    """Canonical warehouse run: park, sprint down the diagonal with harsh
    braking, load with the fork, maneuver to the racks, a loaded transfer
    drive, and a final parking stop."""
    diag = (0.8, 0.6)
    cross = (-0.6, 0.8)
    back = (-0.8, -0.6)
    phases = (
        Phase(EventType.STANDSTILL, 5.0),
        Phase(EventType.STRONG_ACCELERATION, 1.25, accel=2000.0, heading=diag),
        Phase(EventType.DRIVING, 8.0),
        Phase(EventType.HARSH_BRAKING, 1.25, accel=-2000.0),
        Phase(EventType.STANDSTILL, 3.0, fork_rate=200.0),
        Phase(EventType.MANEUVERING, 1.0, accel=300.0, heading=cross),
        Phase(EventType.MANEUVERING, 3.0),
        Phase(EventType.DRIVING, 1.0, accel=500.0),
        Phase(EventType.DRIVING, 8.0, fork_rate=-75.0),
        Phase(EventType.DRIVING, 1.0, accel=-500.0),
        Phase(EventType.MANEUVERING, 2.0, heading=back),
        Phase(EventType.MANEUVERING, 1.0, accel=-300.0),
        Phase(EventType.STANDSTILL, 4.0),
    )
    anchors = {
        "parking_area": (1000.0, 1000.0),
        "load_zone": (19500.0, 14875.0),
        "shelf_zone": (15000.0, 18000.0),
        "diagonal_end": (19500.0, 14875.0),
    }
    return MovementScript(phases=phases, anchors=anchors, start=(1000.0, 1000.0))


def ideal_kinematics(script: MovementScript, rate: float) -> dict[str, np.ndarray]:
    """Noise-free profile of the script on the sampling grid (analytic integration)."""
    n = int(round(script.duration * rate))
    t = np.arange(n) / rate
    speed = np.zeros(n)
    accel = np.zeros(n)
    x = np.zeros(n)
    y = np.zeros(n)
    fork_z = np.zeros(n)
    fork_v = np.zeros(n)

    px, py = script.start
    fz = script.initial_fork_z
    v = 0.0
    heading = (1.0, 0.0)
    t0 = 0.0
    for p in script.phases:
        if p.heading is not None:
            hx, hy = p.heading
            norm = math.hypot(hx, hy)
            heading = (hx / norm, hy / norm)
        idx = np.nonzero((t >= t0 - 1e-12) & (t < t0 + p.duration - 1e-12))[0]
        tau = t[idx] - t0
        vt = v + p.accel * tau
        st = v * tau + 0.5 * p.accel * tau * tau
        speed[idx] = vt
        accel[idx] = p.accel
        x[idx] = px + heading[0] * st
        y[idx] = py + heading[1] * st
        fork_z[idx] = fz + p.fork_rate * tau
        fork_v[idx] = p.fork_rate
        s_end = v * p.duration + 0.5 * p.accel * p.duration ** 2
        px += heading[0] * s_end
        py += heading[1] * s_end
        fz += p.fork_rate * p.duration
        v = max(v + p.accel * p.duration, 0.0)
        t0 += p.duration
    return {"t": t, "x": x, "y": y, "speed": speed, "accel": accel,
            "fork_z": fork_z, "fork_v": fork_v}


def _reference_stack(script: MovementScript, rate: float, n: int,
                     ideal: dict[str, np.ndarray]) -> EventStack:
    events: list[MotionEvent] = []
    # merge consecutive phases with the same label into one ground-truth span
    spans: list[tuple[EventType | None, float, float]] = []
    t0 = 0.0
    for p in script.phases:
        t1 = t0 + p.duration
        if spans and spans[-1][0] == p.label:
            spans[-1] = (p.label, spans[-1][1], t1)
        else:
            spans.append((p.label, t0, t1))
        t0 = t1
    for label, a, b in spans:
        if label is None:
            continue
        ev = _span_event(label, a, b, rate, n, ideal)
        if ev is not None:
            events.append(ev)
    # fork ground truth: runs of constant non-zero fork rate
    t0 = 0.0
    for p in script.phases:
        if p.fork_rate != 0.0:
            ev = _span_event(EventType.FORK_MOTION, t0, t0 + p.duration, rate, n, ideal,
                             direction="lift" if p.fork_rate > 0 else "lower")
            if ev is not None:
                events.append(ev)
        t0 += p.duration
    events.sort(key=lambda e: (e.start_t, e.type is EventType.FORK_MOTION, e.type.value))
    return EventStack(events)


def _span_event(label: EventType, a: float, b: float, rate: float, n: int,
                ideal: dict[str, np.ndarray], direction: str | None = None
                ) -> MotionEvent | None:
    i0 = int(math.ceil(a * rate - 1e-9))
    i1 = min(n, int(math.floor(b * rate + 1e-9)) + 1)
    if i1 - i0 < 2:
        return None
    speed = ideal["speed"][i0:i1]
    accel = ideal["accel"][i0:i1]
    return MotionEvent(
        type=label,
        start_t=i0 / rate,
        end_t=(i1 - 1) / rate,
        start_idx=i0,
        end_idx=i1,
        mean_speed=float(speed.mean()),
        peak_accel=float(accel[np.argmax(np.abs(accel))]) if len(accel) else 0.0,
        distance=float(speed.sum() / rate),
        direction=direction,
    )


def gen_movement(script: MovementScript, rate: float = 100.0, noise_std: float = 2.0,
                 seed=0) -> tuple[list[PositionSample], EventStack]:
    """Noisy samples of the scripted run plus the exact phase-derived event stack."""
    ideal = ideal_kinematics(script, rate)
    n = len(ideal["t"])
    rng = np.random.default_rng(seed)
    noise = _noise(rng, n, noise_std)
    fork_noise = rng.normal(0.0, noise_std * AXIS_SCALE, n) if noise_std > 0 else np.zeros(n)
    samples = [
        PositionSample(
            t=float(ideal["t"][k]),
            x=float(ideal["x"][k] + noise[k, 0]),
            y=float(ideal["y"][k] + noise[k, 1]),
            z=float(noise[k, 2]),
            fork_z=float(ideal["fork_z"][k] + fork_noise[k]),
        )
        for k in range(n)
    ]
    return samples, _reference_stack(script, rate, n, ideal)


# ---------------------------------------------------------------------------
# detection quality


@dataclass
class TypeQuality:
    matched: int = 0
    missed: int = 0
    spurious: int = 0
    recall: float = 1.0
    precision: float = 0.0
    recall_defined: bool = False
    precision_defined: bool = False
    start_deltas: list[float] = field(default_factory=list)
    end_deltas: list[float] = field(default_factory=list)


@dataclass
class DetectionQuality:
    per_type: dict[EventType, TypeQuality]
    match_overlap: float

    def boundary_deltas(self) -> list[float]:
        out: list[float] = []
        for q in self.per_type.values():
            out.extend(abs(d) for d in q.start_deltas)
            out.extend(abs(d) for d in q.end_deltas)
        return out

    def median_boundary_delta(self) -> float:
        deltas = self.boundary_deltas()
        return float(np.median(deltas)) if deltas else 0.0


def _overlap_len(a: MotionEvent, b: MotionEvent) -> float:
    return max(0.0, min(a.end_t, b.end_t) - max(a.start_t, b.start_t))


def evaluate_detection(detected: EventStack, reference: EventStack,
                       match_overlap: float = 0.5) -> DetectionQuality:
    """Greedy chronological one-to-one matching of detected vs reference events.

    A pair of same-type events matches when their temporal intersection covers
    at least ``match_overlap`` of the reference event's duration.
    """
    if not 0.0 < match_overlap <= 1.0:
        raise ValueError("match_overlap must be in (0, 1]")
    per_type: dict[EventType, TypeQuality] = {}
    for kind in EventType:
        refs = sorted(reference.by_type(kind), key=lambda e: e.start_t)
        dets = sorted(detected.by_type(kind), key=lambda e: e.start_t)
        q = TypeQuality()
        used = [False] * len(dets)
        for ref in refs:
            match_i = None
            for i, det in enumerate(dets):
                if used[i]:
                    continue
                if ref.duration > 0 and _overlap_len(det, ref) / ref.duration >= match_overlap:
                    match_i = i
                    break
            if match_i is None:
                q.missed += 1
            else:
                used[match_i] = True
                q.matched += 1
                q.start_deltas.append(dets[match_i].start_t - ref.start_t)
                q.end_deltas.append(dets[match_i].end_t - ref.end_t)
        q.spurious = used.count(False)
        q.recall_defined = bool(refs)
        q.recall = q.matched / len(refs) if refs else 1.0
        q.precision_defined = bool(dets)
        q.precision = q.matched / len(dets) if dets else 0.0
        per_type[kind] = q
    return DetectionQuality(per_type=per_type, match_overlap=match_overlap)

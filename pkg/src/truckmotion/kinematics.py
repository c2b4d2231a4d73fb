"""The signal-processing chain from raw position samples to kinematic frames.

The chain interpolates onto a uniform grid, filters positions, differentiates,
filters velocities, forms the planar resulting speed, differentiates again to
the signed resulting acceleration and filters that too.  Zero-phase filtering
keeps position, velocity and acceleration synchronized for post-analysis; the
causal variant serves live monitoring and is also available as an incremental
streaming processor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .filters import FilterConfig, apply_filter, design, differentiate
from .ingest import DEFAULT_MAX_GAP, PositionSample, UniformSeries, resample

__all__ = [
    "KinematicFrame",
    "ChainConfig",
    "chain_defaults",
    "process_chain",
    "frames_from_series",
    "StreamingChain",
    "frames_to_arrays",
]

DEFAULT_RATE = 100.0  # Hz


@dataclass(frozen=True)
class KinematicFrame:
    """Synchronized kinematic state at one grid tick.

    speed is the planar magnitude of the filtered velocity; accel its signed
    time derivative (negative while braking).  fork_v is None when the source
    has no fork-height channel.  in_gap marks ticks bridged over source holes.
    """

    t: float
    x: float
    y: float
    z: float
    vx: float
    vy: float
    speed: float
    accel: float
    fork_v: float | None = None
    in_gap: bool = False


@dataclass(frozen=True)
class ChainConfig:
    """Chain parameters: grid rate plus one filter per filtered stage."""

    resample_rate: float = DEFAULT_RATE
    filter_pos: FilterConfig = field(default_factory=FilterConfig)
    filter_vel: FilterConfig = field(default_factory=FilterConfig)
    filter_acc: FilterConfig = field(default_factory=FilterConfig)
    max_gap: float = DEFAULT_MAX_GAP

    def to_dict(self) -> dict:
        return {
            "resample_rate": self.resample_rate,
            "filter_pos": self.filter_pos.to_dict(),
            "filter_vel": self.filter_vel.to_dict(),
            "filter_acc": self.filter_acc.to_dict(),
            "max_gap": self.max_gap,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ChainConfig":
        kwargs: dict = {}
        if "resample_rate" in data:
            kwargs["resample_rate"] = float(data["resample_rate"])
        if "max_gap" in data:
            kwargs["max_gap"] = float(data["max_gap"])
        for key in ("filter_pos", "filter_vel", "filter_acc"):
            if key in data:
                kwargs[key] = FilterConfig.from_dict(data[key])
        return cls(**kwargs)


def chain_defaults() -> ChainConfig:
    """Default chain: 100 Hz grid, zero-phase order-1 Butterworth at 1 Hz everywhere."""
    butter = FilterConfig(kind="butterworth", cutoff_hz=1.0, order=1, mode="zero_phase")
    return ChainConfig(
        resample_rate=DEFAULT_RATE,
        filter_pos=butter,
        filter_vel=butter,
        filter_acc=butter,
    )


def frames_from_series(series: UniformSeries, config: ChainConfig) -> list[KinematicFrame]:
    """Run the filter/differentiate stages of the chain on a resampled series."""
    rate = series.rate
    coeff_pos = design(config.filter_pos, rate)
    coeff_vel = design(config.filter_vel, rate)
    coeff_acc = design(config.filter_acc, rate)

    pos = {name: apply_filter(coeff_pos, series.channels[name], config.filter_pos.mode)
           for name in ("x", "y", "z")}
    vel = {name: apply_filter(coeff_vel, differentiate(pos[name], rate), config.filter_vel.mode)
           for name in ("x", "y")}
    fork_v = None
    if "fork_z" in series.channels:
        fork_f = apply_filter(coeff_pos, series.channels["fork_z"], config.filter_pos.mode)
        fork_v = apply_filter(coeff_vel, differentiate(fork_f, rate), config.filter_vel.mode)

    speed = np.hypot(vel["x"], vel["y"])
    accel = apply_filter(coeff_acc, differentiate(speed, rate), config.filter_acc.mode)

    times = series.times
    gap = series.gap_mask()
    return [
        KinematicFrame(
            t=float(times[i]),
            x=float(pos["x"][i]),
            y=float(pos["y"][i]),
            z=float(pos["z"][i]),
            vx=float(vel["x"][i]),
            vy=float(vel["y"][i]),
            speed=float(speed[i]),
            accel=float(accel[i]),
            fork_v=float(fork_v[i]) if fork_v is not None else None,
            in_gap=bool(gap[i]),
        )
        for i in range(series.length)
    ]


def process_chain(samples: Sequence[PositionSample], config: ChainConfig | None = None) -> list[KinematicFrame]:
    """Full chain from raw samples to kinematic frames."""
    config = config or chain_defaults()
    series = resample(samples, config.resample_rate, config.max_gap)
    return frames_from_series(series, config)


def frames_to_arrays(frames: Sequence[KinematicFrame]) -> dict[str, np.ndarray]:
    """Column view of a frame list for vectorized consumers."""
    out = {
        "t": np.array([f.t for f in frames]),
        "x": np.array([f.x for f in frames]),
        "y": np.array([f.y for f in frames]),
        "z": np.array([f.z for f in frames]),
        "vx": np.array([f.vx for f in frames]),
        "vy": np.array([f.vy for f in frames]),
        "speed": np.array([f.speed for f in frames]),
        "accel": np.array([f.accel for f in frames]),
        "in_gap": np.array([f.in_gap for f in frames], dtype=bool),
    }
    if frames and frames[0].fork_v is not None:
        out["fork_v"] = np.array([f.fork_v for f in frames])
    return out


class _CausalFilterState:
    """Incremental step-matched difference-equation cascade."""

    def __init__(self, config: FilterConfig, rate: float):
        coeffs = design(replace(config, mode="causal"), rate)
        self._sections = coeffs.sections
        self._x: list[list[float]] | None = None
        self._y: list[list[float]] | None = None

    def push(self, value: float) -> float:
        if self._x is None:
            # Seed every section's history as if the input had always been
            # this first value (all designs have unity DC gain).
            self._x = [[value] * max(len(b) - 1, 0) for b, _ in self._sections]
            self._y = [[value] * max(len(a) - 1, 0) for _, a in self._sections]
        v = value
        for i, (b, a) in enumerate(self._sections):
            xh, yh = self._x[i], self._y[i]
            acc = b[0] * v
            for j in range(1, len(b)):
                acc += b[j] * xh[j - 1]
            for j in range(1, len(a)):
                acc -= a[j] * yh[j - 1]
            acc /= a[0]
            if xh:
                xh.insert(0, v)
                xh.pop()
            if yh:
                yh.insert(0, acc)
                yh.pop()
            v = acc
        return v


class StreamingChain:
    """Causal, incremental version of the chain for live sessions.

    Samples arrive one by one; completed grid ticks are interpolated, filtered
    with causal filters and differentiated with the same central differences
    as the batch chain, which costs a structural delay of two ticks (one per
    differentiation stage).  ``latency_s`` reports that delay plus the causal
    filters' DC group delay.
    """

    def __init__(self, config: ChainConfig | None = None, has_fork: bool | None = None):
        base = config or chain_defaults()
        self.config = ChainConfig(
            resample_rate=base.resample_rate,
            filter_pos=replace(base.filter_pos, mode="causal"),
            filter_vel=replace(base.filter_vel, mode="causal"),
            filter_acc=replace(base.filter_acc, mode="causal"),
            max_gap=base.max_gap,
        )
        self.rate = self.config.resample_rate
        self._dt = 1.0 / self.rate
        self._has_fork = has_fork
        self._prev: PositionSample | None = None
        self._t0: float | None = None
        self._next_tick = 0
        self._filters_ready = False
        self._pos_hist: list[dict] = []  # filtered position ticks awaiting differentiation
        self._vel_hist: list[dict] = []
        self._gap_ticks: set[int] = set()
        self.frames: list[KinematicFrame] = []

    @property
    def latency_s(self) -> float:
        from .filters import frequency_response

        delay = 2 * self._dt
        eps = 1e-4
        for cfg in (self.config.filter_pos, self.config.filter_vel, self.config.filter_acc):
            coeffs = design(cfg, self.rate)
            phase = np.angle(frequency_response(coeffs, eps))[0]
            delay += float(-phase / (2 * math.pi * eps))
        return delay

    def _ensure_filters(self, has_fork: bool) -> None:
        if self._filters_ready:
            return
        self._has_fork = has_fork
        self._fp = {c: _CausalFilterState(self.config.filter_pos, self.rate) for c in ("x", "y", "z")}
        self._fv = {c: _CausalFilterState(self.config.filter_vel, self.rate) for c in ("x", "y")}
        if has_fork:
            self._fp["fork_z"] = _CausalFilterState(self.config.filter_pos, self.rate)
            self._fv["fork"] = _CausalFilterState(self.config.filter_vel, self.rate)
        self._fa = _CausalFilterState(self.config.filter_acc, self.rate)
        self._filters_ready = True

    def push(self, sample: PositionSample) -> list[KinematicFrame]:
        """Feed one sample; returns any frames that became computable."""
        out: list[KinematicFrame] = []
        if self._t0 is None:
            self._t0 = sample.t
            self._ensure_filters(sample.fork_z is not None)
            self._emit_tick(0, sample, sample, out)
            self._next_tick = 1
            self._prev = sample
            return out
        prev = self._prev
        assert prev is not None
        if sample.t <= prev.t:
            return out
        is_gap = (sample.t - prev.t) > self.config.max_gap
        while self._t0 + self._next_tick / self.rate <= sample.t:
            k = self._next_tick
            tk = self._t0 + k / self.rate
            if is_gap and prev.t < tk < sample.t:
                self._gap_ticks.add(k)
            self._emit_tick(k, prev, sample, out)
            self._next_tick += 1
        self._prev = sample
        return out

    def _interp(self, a: PositionSample, b: PositionSample, tk: float, attr: str) -> float:
        va, vb = getattr(a, attr), getattr(b, attr)
        if a.t == b.t:
            return float(va)
        w = (tk - a.t) / (b.t - a.t)
        return float(va + (vb - va) * w)

    def _emit_tick(self, k: int, a: PositionSample, b: PositionSample,
                   out: list[KinematicFrame]) -> None:
        tk = self._t0 + k / self.rate
        raw = {c: self._interp(a, b, tk, c) for c in ("x", "y", "z")}
        if self._has_fork:
            raw["fork_z"] = self._interp(a, b, tk, "fork_z")
        filt = {c: self._fp[c].push(v) for c, v in raw.items()}
        filt["tick"] = k
        self._pos_hist.append(filt)
        if len(self._pos_hist) < 3:
            return
        if len(self._pos_hist) > 3:
            self._pos_hist.pop(0)
        p0, p1, p2 = self._pos_hist
        mid = p1["tick"]
        vel = {
            "x": self._fv["x"].push((p2["x"] - p0["x"]) * self.rate / 2.0),
            "y": self._fv["y"].push((p2["y"] - p0["y"]) * self.rate / 2.0),
            "tick": mid,
            "x_pos": p1["x"], "y_pos": p1["y"], "z_pos": p1["z"],
        }
        if self._has_fork:
            vel["fork"] = self._fv["fork"].push((p2["fork_z"] - p0["fork_z"]) * self.rate / 2.0)
        vel["speed"] = math.hypot(vel["x"], vel["y"])
        self._vel_hist.append(vel)
        if len(self._vel_hist) < 3:
            return
        if len(self._vel_hist) > 3:
            self._vel_hist.pop(0)
        v0, v1, v2 = self._vel_hist
        accel = self._fa.push((v2["speed"] - v0["speed"]) * self.rate / 2.0)
        k_out = v1["tick"]
        frame = KinematicFrame(
            t=self._t0 + k_out / self.rate,
            x=v1["x_pos"], y=v1["y_pos"], z=v1["z_pos"],
            vx=v1["x"], vy=v1["y"],
            speed=v1["speed"], accel=accel,
            fork_v=v1.get("fork"),
            in_gap=k_out in self._gap_ticks,
        )
        self.frames.append(frame)
        out.append(frame)

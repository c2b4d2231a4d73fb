"""Parsing, validation and uniform resampling of indoor-positioning logs.

Two batch formats are supported (CSV with a ``t,x,y,z[,fork_z]`` header and
JSONL with one object per line) plus a line-oriented live ingest session that
applies the same validation record by record.  All positions are millimeters,
timestamps seconds.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "PositionSample",
    "UniformSeries",
    "ParseError",
    "parse_log",
    "resample",
    "series_to_samples",
    "group_by_source",
    "LiveIngestSession",
    "live_ingest",
]

DEFAULT_SOURCE = "default"
DEFAULT_MAX_GAP = 1.0  # seconds bridged silently; longer holes are flagged


class ParseError(ValueError):
    """Malformed or invalid log content; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class PositionSample:
    """One timestamped 3-D position fix, optionally with a fork-height channel."""

    t: float
    x: float
    y: float
    z: float
    source_id: str = DEFAULT_SOURCE
    fork_z: float | None = None


@dataclass
class UniformSeries:
    """Equidistant multi-channel series produced by :func:`resample`.

    ``gaps`` lists half-open index ranges of grid ticks that fall inside
    source holes longer than ``max_gap``; the values there are linear bridges
    and should not be trusted for event detection.
    """

    t0: float
    rate: float
    channels: dict[str, np.ndarray]
    gaps: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.rate <= 0:
            raise ValueError("rate must be > 0")
        lengths = {len(v) for v in self.channels.values()}
        if len(lengths) > 1:
            raise ValueError("all channels must share one length")
        n = self.length
        for start, end in self.gaps:
            if not (0 <= start < end <= n):
                raise ValueError(f"gap range [{start},{end}) outside series")

    @property
    def length(self) -> int:
        return len(next(iter(self.channels.values())))

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(self.length) / self.rate

    def gap_mask(self) -> np.ndarray:
        mask = np.zeros(self.length, dtype=bool)
        for start, end in self.gaps:
            mask[start:end] = True
        return mask


def _validate_sample(t: float, x: float, y: float, z: float,
                     fork_z: float | None, line: int) -> None:
    for name, value in (("t", t), ("x", x), ("y", y), ("z", z)):
        if not math.isfinite(value):
            raise ParseError(f"non-finite {name} value {value!r}", line)
    if fork_z is not None and not math.isfinite(fork_z):
        raise ParseError(f"non-finite fork_z value {fork_z!r}", line)


def _parse_csv(text: str) -> list[PositionSample]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty input") from None
    header = [h.strip() for h in header]
    if header[:4] != ["t", "x", "y", "z"]:
        raise ParseError(f"expected header t,x,y,z[,fork_z], got {','.join(header)}", 1)
    has_fork = len(header) > 4 and header[4] == "fork_z"
    samples = []
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        try:
            t, x, y, z = (float(v) for v in row[:4])
        except (ValueError, IndexError):
            raise ParseError(f"malformed row {row!r}", line_no) from None
        fork = None
        if has_fork and len(row) > 4 and row[4] != "":
            try:
                fork = float(row[4])
            except ValueError:
                raise ParseError(f"malformed fork_z {row[4]!r}", line_no) from None
        _validate_sample(t, x, y, z, fork, line_no)
        samples.append(PositionSample(t, x, y, z, fork_z=fork))
    return samples


def parse_record(obj: dict, line: int | None = None) -> PositionSample:
    """Validate one JSONL record object into a sample."""
    try:
        t = float(obj["t"])
        x = float(obj["x"])
        y = float(obj["y"])
        z = float(obj["z"])
    except (KeyError, TypeError, ValueError):
        raise ParseError(f"record missing or non-numeric t/x/y/z: {obj!r}", line) from None
    fork = obj.get("fork_z")
    fork = float(fork) if fork is not None else None
    source = str(obj.get("id", DEFAULT_SOURCE))
    _validate_sample(t, x, y, z, fork, line)
    return PositionSample(t, x, y, z, source_id=source, fork_z=fork)


def _parse_jsonl(text: str) -> list[PositionSample]:
    samples = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line_no) from None
        samples.append(parse_record(obj, line_no))
    return samples


def parse_log(raw: bytes | str, format: str = "csv") -> list[PositionSample]:
    """Parse a recorded log into validated samples.

    Output is grouped by source id and sorted by time within each source;
    duplicate timestamps collapse to the last value seen.
    """
    text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    if format == "csv":
        samples = _parse_csv(text)
    elif format == "jsonl":
        samples = _parse_jsonl(text)
    else:
        raise ValueError(f"unknown log format {format!r}")
    if not samples:
        raise ParseError("empty input")
    by_key: dict[tuple[str, float], PositionSample] = {}
    for s in samples:  # last writer wins on duplicate timestamps
        by_key[(s.source_id, s.t)] = s
    return sorted(by_key.values(), key=lambda s: (s.source_id, s.t))


def group_by_source(samples: Iterable[PositionSample]) -> dict[str, list[PositionSample]]:
    groups: dict[str, list[PositionSample]] = {}
    for s in samples:
        groups.setdefault(s.source_id, []).append(s)
    return groups


def resample(samples: Sequence[PositionSample], rate: float,
             max_gap: float = DEFAULT_MAX_GAP) -> UniformSeries:
    """Linearly interpolate one source's samples onto a uniform grid.

    Source intervals longer than ``max_gap`` are still bridged linearly but
    recorded in ``gaps`` so downstream consumers can suppress events there.
    """
    if rate <= 0:
        raise ValueError("rate must be > 0")
    if len(samples) < 2:
        raise ValueError("resample needs at least 2 samples")
    sources = {s.source_id for s in samples}
    if len(sources) > 1:
        raise ValueError(f"resample expects a single source, got {sorted(sources)}")
    t = np.array([s.t for s in samples])
    if np.any(np.diff(t) <= 0):
        raise ValueError("sample timestamps must be strictly increasing")
    duration = float(t[-1] - t[0])
    if duration <= 0:
        raise ValueError("zero total duration")
    n = int(math.floor(duration * rate)) + 1
    grid = t[0] + np.arange(n) / rate
    channels: dict[str, np.ndarray] = {}
    for name in ("x", "y", "z"):
        vals = np.array([getattr(s, name) for s in samples])
        channels[name] = np.interp(grid, t, vals)
    forks = [s.fork_z for s in samples]
    if all(f is not None for f in forks):
        channels["fork_z"] = np.interp(grid, t, np.array(forks, dtype=float))
    gaps: list[tuple[int, int]] = []
    wide = np.nonzero(np.diff(t) > max_gap)[0]
    for i in wide:
        start = int(np.searchsorted(grid, t[i], side="right"))
        end = int(np.searchsorted(grid, t[i + 1], side="left"))
        if start < end:
            if gaps and gaps[-1][1] >= start:
                gaps[-1] = (gaps[-1][0], end)
            else:
                gaps.append((start, end))
    return UniformSeries(t0=float(t[0]), rate=float(rate), channels=channels, gaps=gaps)


def series_to_samples(series: UniformSeries, source_id: str = DEFAULT_SOURCE) -> list[PositionSample]:
    """Flatten a uniform series back into position samples (for round-trips)."""
    times = series.times
    fork = series.channels.get("fork_z")
    return [
        PositionSample(
            float(times[i]),
            float(series.channels["x"][i]),
            float(series.channels["y"][i]),
            float(series.channels["z"][i]),
            source_id=source_id,
            fork_z=float(fork[i]) if fork is not None else None,
        )
        for i in range(series.length)
    ]


class LiveIngestSession:
    """Single-writer record-by-record ingest with the batch validation rules.

    Out-of-order records (t not strictly after the last accepted t of the
    same source) are dropped and counted; malformed lines are counted and
    skipped so one bad record cannot kill a live stream.
    """

    def __init__(self, sink: Callable[[PositionSample], None] | None = None):
        self._sink = sink
        self.buffer: list[PositionSample] = []
        self.dropped = 0
        self.malformed = 0
        self.finalized = False
        self._last_t: dict[str, float] = {}

    def feed_line(self, line: str) -> PositionSample | None:
        if self.finalized:
            raise RuntimeError("session already finalized")
        if not line.strip():
            return None
        try:
            obj = json.loads(line)
            sample = parse_record(obj)
        except (ParseError, json.JSONDecodeError):
            self.malformed += 1
            return None
        return self.feed_sample(sample)

    def feed_sample(self, sample: PositionSample) -> PositionSample | None:
        if self.finalized:
            raise RuntimeError("session already finalized")
        last = self._last_t.get(sample.source_id)
        if last is not None and sample.t <= last:
            self.dropped += 1
            return None
        self._last_t[sample.source_id] = sample.t
        self.buffer.append(sample)
        if self._sink is not None:
            self._sink(sample)
        return sample

    def finalize(self) -> list[PositionSample]:
        self.finalized = True
        return list(self.buffer)


def live_ingest(stream: Iterable[str], sink: Callable[[PositionSample], None] | None = None) -> LiveIngestSession:
    """Consume a line-delimited JSONL stream into a finalized session."""
    session = LiveIngestSession(sink)
    for line in stream:
        session.feed_line(line)
    session.finalize()
    return session

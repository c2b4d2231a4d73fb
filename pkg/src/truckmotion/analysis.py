"""End-to-end analysis bundle shared by the CLI report path and the HTTP API.

Centralizing the chain -> events -> KPI -> heatmap pipeline and the artifact
writers here guarantees that a finalized API session and a CLI run over the
same input produce byte-identical outputs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

from . import serialize
from .area import DEFAULT_SECTOR_MM, GridSpec, HeatmapLayer, METRICS, build_heatmap, extract_trajectory
from .events import EventLimits, EventStack, default_limits, detect_events
from .ingest import PositionSample
from .kinematics import ChainConfig, KinematicFrame, chain_defaults, process_chain
from .kpi import KpiReport, compute_kpis

__all__ = ["AnalysisBundle", "analyze_samples", "write_artifacts", "ARTIFACT_NAMES"]

ARTIFACT_NAMES = {
    "frames": "frames.csv",
    "events": "events.jsonl",
    "kpi": "kpi.json",
    "trajectory": "trajectory.jsonl",
    "heatmap": "heatmap_{metric}.json",
}


@dataclass
class AnalysisBundle:
    """Everything derived from one recording under one configuration."""

    frames: list[KinematicFrame]
    stack: EventStack
    kpi: KpiReport
    chain: ChainConfig
    limits: EventLimits

    @property
    def window(self) -> tuple[float, float]:
        return (self.frames[0].t, self.frames[-1].t)

    def full_span(self) -> tuple[float, float]:
        """Half-open window covering every frame (one tick past the last)."""
        if len(self.frames) > 1:
            dt = (self.frames[-1].t - self.frames[0].t) / (len(self.frames) - 1)
        else:
            dt = 0.0
        return (self.frames[0].t, self.frames[-1].t + dt)

    def heatmap(self, metric: str, sector: float = DEFAULT_SECTOR_MM,
                window: tuple[float, float] | None = None) -> HeatmapLayer:
        grid = GridSpec.covering(self.frames, sector)
        return build_heatmap(self.frames, grid, metric, window or self.full_span())


def analyze_samples(samples: Sequence[PositionSample],
                    chain: ChainConfig | None = None,
                    limits: EventLimits | None = None) -> AnalysisBundle:
    chain = chain or chain_defaults()
    limits = limits or default_limits()
    frames = process_chain(samples, chain)
    stack = detect_events(frames, limits)
    report = compute_kpis(stack, frames)
    return AnalysisBundle(frames=frames, stack=stack, kpi=report, chain=chain, limits=limits)


def write_artifacts(bundle: AnalysisBundle, out_dir: str,
                    sector: float = DEFAULT_SECTOR_MM, figures: bool = True) -> list[str]:
    """Write the delimited/JSON artifacts (and figures) for one analysis."""
    os.makedirs(out_dir, exist_ok=True)
    written = []

    def _write(name: str, text: str) -> None:
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        written.append(path)

    _write(ARTIFACT_NAMES["frames"], serialize.frames_to_csv(bundle.frames))
    _write(ARTIFACT_NAMES["events"], serialize.stack_to_jsonl(bundle.stack))
    _write(ARTIFACT_NAMES["kpi"], serialize.kpi_to_json(bundle.kpi))
    polylines = extract_trajectory(bundle.frames, bundle.full_span())
    _write(ARTIFACT_NAMES["trajectory"], serialize.trajectory_to_jsonl(polylines))
    layers = {}
    for metric in METRICS:
        layer = bundle.heatmap(metric, sector)
        layers[metric] = layer
        _write(ARTIFACT_NAMES["heatmap"].format(metric=metric), serialize.heatmap_to_json(layer))

    if figures:
        from . import plots

        plots.render_trajectory(polylines, os.path.join(out_dir, "trajectory.png"))
        plots.render_heatmap(layers["dwell_time"], os.path.join(out_dir, "heatmap_dwell_time.png"))
        plots.render_event_timeline(bundle.frames, bundle.stack,
                                    os.path.join(out_dir, "events.png"))
        written += [os.path.join(out_dir, n)
                    for n in ("trajectory.png", "heatmap_dwell_time.png", "events.png")]
    return written

"""truckmotion: industrial-truck operation analytics from indoor-positioning data."""

from .area import GridSpec, HeatmapLayer, build_heatmap, extract_trajectory
from .events import (
    EventLimits,
    EventStack,
    EventType,
    MotionEvent,
    default_limits,
    detect_events,
    segment_trajectory,
)
from .filters import FilterConfig, FilterCoefficients, apply_causal, apply_zero_phase, design, differentiate
from .ingest import PositionSample, UniformSeries, live_ingest, parse_log, resample
from .kinematics import ChainConfig, KinematicFrame, StreamingChain, chain_defaults, process_chain
from .kpi import KpiReport, compute_kpis
from .synthlab import (
    DetectionQuality,
    ManipulationSpec,
    MovementScript,
    Phase,
    default_movement_script,
    evaluate_detection,
    gen_movement,
    gen_static,
    manipulate,
    run_static_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "PositionSample", "UniformSeries", "parse_log", "resample", "live_ingest",
    "FilterConfig", "FilterCoefficients", "design", "apply_causal", "apply_zero_phase",
    "differentiate",
    "ChainConfig", "KinematicFrame", "chain_defaults", "process_chain", "StreamingChain",
    "EventType", "EventLimits", "MotionEvent", "EventStack", "default_limits",
    "detect_events", "segment_trajectory",
    "KpiReport", "compute_kpis",
    "GridSpec", "HeatmapLayer", "build_heatmap", "extract_trajectory",
    "ManipulationSpec", "MovementScript", "Phase", "DetectionQuality",
    "gen_static", "manipulate", "run_static_sweep", "gen_movement",
    "default_movement_script", "evaluate_detection",
    "__version__",
]

// Pure view-model builders. Every number they emit is copied or trivially
// reshaped from one API payload, so contract tests can trace each displayed
// value back to the recorded response it came from.

import { EVENT_COLORS, UNCLASSIFIED_COLOR } from "./colors.js";
import type {
  EventKind,
  Frame,
  HeatmapLayer,
  KpiReport,
  MotionEvent,
  Polyline,
} from "./types.js";

// ---------------------------------------------------------------------------
// monitor view

export interface MonitorModel {
  t: number[];
  speed: number[];
  accel: number[];
  x: number[];
  y: number[];
  latest: Frame | null;
  elapsed: number;
  /** Travelled distance integrated from the streamed speeds (display only). */
  distance: number;
}

export function emptyMonitorModel(): MonitorModel {
  return { t: [], speed: [], accel: [], x: [], y: [], latest: null, elapsed: 0, distance: 0 };
}

export function pushFrame(model: MonitorModel, frame: Frame, keep = 3000): MonitorModel {
  const prev = model.latest;
  const dt = prev ? frame.t - prev.t : 0;
  model.t.push(frame.t);
  model.speed.push(frame.speed);
  model.accel.push(frame.accel);
  model.x.push(frame.x);
  model.y.push(frame.y);
  if (model.t.length > keep) {
    model.t.shift();
    model.speed.shift();
    model.accel.shift();
    model.x.shift();
    model.y.shift();
  }
  return {
    ...model,
    latest: frame,
    elapsed: model.t.length > 1 ? frame.t - model.t[0] : 0,
    distance: model.distance + (dt > 0 ? frame.speed * dt : 0),
  };
}

export function monitorFromFrames(frames: Frame[]): MonitorModel {
  let model = emptyMonitorModel();
  for (const f of frames) model = pushFrame(model, f);
  if (frames.length > 1) model.elapsed = frames[frames.length - 1].t - frames[0].t;
  return model;
}

// ---------------------------------------------------------------------------
// area view

export interface HeatCell {
  row: number;
  col: number;
  x0: number;
  y0: number;
  size: number;
  value: number;
}

export interface AreaModel {
  polylines: Polyline[];
  pointCount: number;
  cells: HeatCell[];
  maxValue: number;
  dwellSum: number;
  window: [number, number];
  empty: boolean;
}

export function areaModel(trajectory: Polyline[], heatmap: HeatmapLayer): AreaModel {
  const cells: HeatCell[] = [];
  let maxValue = 0;
  let dwellSum = heatmap.out_of_grid_dwell;
  const g = heatmap.grid;
  heatmap.values.forEach((rowValues, row) => {
    rowValues.forEach((value, col) => {
      dwellSum += value;
      if (value > maxValue) maxValue = value;
      if (value > 0) {
        cells.push({
          row,
          col,
          x0: g.origin_x + col * g.sector_size,
          y0: g.origin_y + row * g.sector_size,
          size: g.sector_size,
          value,
        });
      }
    });
  });
  if (heatmap.metric !== "dwell_time") dwellSum = Number.NaN;
  const pointCount = trajectory.reduce((n, line) => n + line.length, 0);
  return {
    polylines: trajectory,
    pointCount,
    cells,
    maxValue,
    dwellSum,
    window: heatmap.window,
    empty: pointCount === 0,
  };
}

// ---------------------------------------------------------------------------
// motion view

export interface ColoredSegment {
  kind: EventKind;
  color: string;
  points: Array<[number, number]>;
}

export interface EventStartPoint {
  kind: EventKind;
  color: string;
  x: number;
  y: number;
  t: number;
}

export interface KpiEntry {
  key: keyof KpiReport;
  label: string;
  value: number;
  unit: string;
}

export interface MotionModel {
  segments: ColoredSegment[];
  startPoints: EventStartPoint[];
  backdrop: Array<[number, number]>;
  kpis: KpiEntry[];
  noDriving: boolean;
}

const KPI_LABELS: Array<[keyof KpiReport, string, string]> = [
  ["total_driving_time", "Total driving time", "s"],
  ["total_standstill_time", "Total standstill time", "s"],
  ["equipment_utilization", "Equipment utilization", ""],
  ["average_driving_velocity", "Average driving velocity", "mm/s"],
  ["simultaneous_loading_and_driving", "Simultaneous loading and driving", "s"],
  ["total_driving_distance", "Total driving distance", "mm"],
];

export function kpiPanel(report: KpiReport): KpiEntry[] {
  return KPI_LABELS.map(([key, label, unit]) => ({
    key,
    label,
    unit,
    value: report[key] as number,
  }));
}

export function motionModel(
  events: MotionEvent[],
  kpi: KpiReport,
  frames: Frame[],
  selected: EventKind[],
): MotionModel {
  const wanted = new Set(selected);
  const segments: ColoredSegment[] = [];
  const startPoints: EventStartPoint[] = [];
  const indexByT = new Map(frames.map((f, i) => [f.t, i] as const));
  for (const ev of events) {
    if (!wanted.has(ev.type)) continue;
    const color = EVENT_COLORS[ev.type];
    const i0 = indexByT.get(ev.start_t);
    const i1 = indexByT.get(ev.end_t);
    if (i0 === undefined || i1 === undefined) continue;
    segments.push({
      kind: ev.type,
      color,
      points: frames.slice(i0, i1 + 1).map((f) => [f.x, f.y] as [number, number]),
    });
    startPoints.push({ kind: ev.type, color, x: frames[i0].x, y: frames[i0].y, t: ev.start_t });
  }
  return {
    segments,
    startPoints,
    backdrop: frames.map((f) => [f.x, f.y] as [number, number]),
    kpis: kpiPanel(kpi),
    noDriving: kpi.no_driving,
  };
}

export { UNCLASSIFIED_COLOR };

// Payload shapes of the analysis API. Field names mirror the wire format.

export interface Frame {
  t: number;
  x: number;
  y: number;
  z: number;
  vx: number;
  vy: number;
  speed: number;
  accel: number;
  in_gap: boolean;
  fork_v?: number;
}

export type EventKind =
  | "standstill"
  | "maneuvering"
  | "driving"
  | "harsh_braking"
  | "strong_acceleration"
  | "fork_motion";

export interface MotionEvent {
  type: EventKind;
  start_t: number;
  end_t: number;
  start_idx: number;
  end_idx: number;
  mean_speed: number;
  peak_accel: number;
  distance: number;
  direction?: "lift" | "lower";
}

export interface KpiReport {
  total_driving_time: number;
  total_standstill_time: number;
  equipment_utilization: number;
  average_driving_velocity: number;
  simultaneous_loading_and_driving: number;
  total_driving_distance: number;
  window: [number, number];
  no_driving: boolean;
  activity_ratio: number;
}

export interface GridSpec {
  origin_x: number;
  origin_y: number;
  sector_size: number;
  cols: number;
  rows: number;
}

export interface HeatmapLayer {
  metric: "dwell_time" | "max_speed" | "max_accel";
  grid: GridSpec;
  window: [number, number];
  values: number[][];
  out_of_grid_count: number;
  out_of_grid_dwell: number;
}

/** One trajectory polyline: [t, x, y] points in chronological order. */
export type Polyline = Array<[number, number, number]>;

export interface SessionInfo {
  id: string;
  state: "live" | "finalized";
  frame_count: number;
  sample_count: number | null;
  dropped: number | null;
  malformed: number | null;
  latest: Frame | null;
  latency_s: number | null;
}

export interface EventLimitsPatch {
  standstill_speed_below?: number;
  maneuvering_speed_below?: number;
  driving_speed_at_least?: number;
  braking_accel_at_most?: number;
  acceleration_accel_at_least?: number;
  fork_speed_at_least?: number;
}

export interface ReanalyzeResult {
  events: MotionEvent[];
  kpi: KpiReport;
}

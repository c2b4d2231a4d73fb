import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { parseNdjson, trajectoryFromNdjson } from "../src/api.js";
import type {
  Frame,
  HeatmapLayer,
  KpiReport,
  MotionEvent,
  Polyline,
  ReanalyzeResult,
  SessionInfo,
} from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));
const root = join(here, "..", "fixtures");

export function raw(name: string): string {
  return readFileSync(join(root, name), "utf-8");
}

export const sessions = JSON.parse(raw("sessions.json")) as SessionInfo[];
export const frames = JSON.parse(raw("frames.json")) as Frame[];
export const framesWindow = JSON.parse(raw("frames_window.json")) as Frame[];
export const events = parseNdjson<MotionEvent>(raw("events.ndjson"));
export const kpi = JSON.parse(raw("kpi.json")) as KpiReport;
export const kpiWindow = JSON.parse(raw("kpi_window.json")) as KpiReport;
export const heatmap = JSON.parse(raw("heatmap.json")) as HeatmapLayer;
export const trajectory: Polyline[] = trajectoryFromNdjson(raw("trajectory.ndjson"));
export const trajectoryWindow: Polyline[] = trajectoryFromNdjson(raw("trajectory_window.ndjson"));
export const reanalyze = JSON.parse(raw("reanalyze.json")) as ReanalyzeResult;

export function liveFrames(): Frame[] {
  return raw("live.sse")
    .split("\n")
    .filter((line) => line.startsWith("data: "))
    .map((line) => JSON.parse(line.slice(6)) as Frame);
}

import { EVENT_KINDS } from "./colors.js";
import type { EventKind } from "./types.js";

// Everything a deep link needs to reproduce a view. Windows are half-open
// [from, to) seconds relative to the session start, quantized to the slider
// granularity of 0.1 s.

export type ViewName = "monitor" | "area" | "motion";
export type MotionMode = "trajectory" | "scatter";

export interface ViewState {
  session: string | null;
  view: ViewName;
  from: number | null;
  to: number | null;
  types: EventKind[];
  sector: number;
  mode: MotionMode;
}

export const SLIDER_STEP = 0.1;
export const DEFAULT_SECTOR = 500;

export function defaultState(): ViewState {
  return {
    session: null,
    view: "monitor",
    from: null,
    to: null,
    types: [...EVENT_KINDS],
    sector: DEFAULT_SECTOR,
    mode: "trajectory",
  };
}

export function quantize(value: number): number {
  return Math.round(value / SLIDER_STEP) * SLIDER_STEP;
}

export function encodeState(state: ViewState): string {
  const q = new URLSearchParams();
  if (state.session) q.set("session", state.session);
  q.set("view", state.view);
  if (state.from !== null) q.set("from", quantize(state.from).toFixed(1));
  if (state.to !== null) q.set("to", quantize(state.to).toFixed(1));
  if (state.types.length !== EVENT_KINDS.length) q.set("types", state.types.join(","));
  if (state.sector !== DEFAULT_SECTOR) q.set("sector", String(state.sector));
  if (state.mode !== "trajectory") q.set("mode", state.mode);
  return q.toString();
}

export function decodeState(search: string): ViewState {
  const q = new URLSearchParams(search);
  const state = defaultState();
  state.session = q.get("session");
  const view = q.get("view");
  if (view === "monitor" || view === "area" || view === "motion") state.view = view;
  const from = q.get("from");
  if (from !== null && Number.isFinite(Number(from))) state.from = quantize(Number(from));
  const to = q.get("to");
  if (to !== null && Number.isFinite(Number(to))) state.to = quantize(Number(to));
  const types = q.get("types");
  if (types !== null) {
    const wanted = types.split(",").filter((t): t is EventKind =>
      (EVENT_KINDS as string[]).includes(t),
    );
    if (wanted.length > 0) state.types = wanted;
  }
  const sector = q.get("sector");
  if (sector !== null && Number(sector) > 0) state.sector = Number(sector);
  if (q.get("mode") === "scatter") state.mode = "scatter";
  return state;
}

import type { EventKind } from "./types.js";

// One legend shared by every view so event colors always agree.
export const EVENT_COLORS: Record<EventKind, string> = {
  standstill: "#d62728",
  maneuvering: "#ff7f0e",
  driving: "#2ca02c",
  harsh_braking: "#9467bd",
  strong_acceleration: "#1f77b4",
  fork_motion: "#8c564b",
};

export const UNCLASSIFIED_COLOR = "#bbbbbb";

export const EVENT_KINDS = Object.keys(EVENT_COLORS) as EventKind[];

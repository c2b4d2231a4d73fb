// Thin typed client over the session API. The UI performs no analytics of
// its own: every displayed number comes out of one of these calls.

import type {
  EventLimitsPatch,
  Frame,
  HeatmapLayer,
  KpiReport,
  MotionEvent,
  Polyline,
  ReanalyzeResult,
  SessionInfo,
} from "./types.js";

export interface WindowParams {
  from?: number;
  to?: number;
}

function query(params: Record<string, unknown>): string {
  const q = new URLSearchParams();
  for (const [k, v] of Object.entries(params)) {
    if (v !== undefined && v !== null) q.set(k, String(v));
  }
  const s = q.toString();
  return s ? `?${s}` : "";
}

/** Parse newline-delimited JSON (events, trajectory endpoints). */
export function parseNdjson<T>(text: string): T[] {
  return text
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line) => JSON.parse(line) as T);
}

export function trajectoryFromNdjson(text: string): Polyline[] {
  return parseNdjson<{ points: Polyline }>(text).map((row) => row.points);
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async getJson<T>(path: string): Promise<T> {
    const res = await fetch(this.base + path);
    if (!res.ok) throw new Error(`${path}: HTTP ${res.status}`);
    return (await res.json()) as T;
  }

  private async getText(path: string): Promise<string> {
    const res = await fetch(this.base + path);
    if (!res.ok) throw new Error(`${path}: HTTP ${res.status}`);
    return res.text();
  }

  listSessions(): Promise<SessionInfo[]> {
    return this.getJson("/sessions");
  }

  sessionInfo(id: string): Promise<SessionInfo> {
    return this.getJson(`/sessions/${id}`);
  }

  frames(id: string, win: WindowParams = {}, stride = 1): Promise<Frame[]> {
    return this.getJson(`/sessions/${id}/frames${query({ ...win, stride })}`);
  }

  async events(id: string, types?: string[]): Promise<MotionEvent[]> {
    const text = await this.getText(
      `/sessions/${id}/events${query({ types: types?.join(",") })}`,
    );
    return parseNdjson<MotionEvent>(text);
  }

  kpi(id: string, win: WindowParams = {}): Promise<KpiReport> {
    return this.getJson(`/sessions/${id}/kpi${query({ ...win })}`);
  }

  heatmap(
    id: string,
    metric: HeatmapLayer["metric"],
    sector: number,
    win: WindowParams = {},
  ): Promise<HeatmapLayer> {
    return this.getJson(`/sessions/${id}/heatmap${query({ metric, sector, ...win })}`);
  }

  async trajectory(id: string, win: WindowParams = {}): Promise<Polyline[]> {
    const text = await this.getText(`/sessions/${id}/trajectory${query({ ...win })}`);
    return trajectoryFromNdjson(text);
  }

  async createSession(id?: string): Promise<SessionInfo> {
    const res = await fetch(`${this.base}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(id ? { id } : {}),
    });
    if (!res.ok) throw new Error(`create session: HTTP ${res.status}`);
    return (await res.json()) as SessionInfo;
  }

  async finalize(id: string): Promise<SessionInfo> {
    const res = await fetch(`${this.base}/sessions/${id}/finalize`, { method: "POST" });
    if (!res.ok) throw new Error(`finalize: HTTP ${res.status}`);
    return (await res.json()) as SessionInfo;
  }

  async reanalyze(id: string, limits: EventLimitsPatch): Promise<ReanalyzeResult> {
    const res = await fetch(`${this.base}/sessions/${id}/reanalyze`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ limits }),
    });
    if (!res.ok) throw new Error(`reanalyze: HTTP ${res.status}`);
    return (await res.json()) as ReanalyzeResult;
  }

  /** Subscribe to the live frame stream; returns an unsubscribe function. */
  subscribeLive(
    id: string,
    onFrame: (frame: Frame) => void,
    onEnd?: () => void,
    onError?: () => void,
  ): () => void {
    const source = new EventSource(`${this.base}/sessions/${id}/live`);
    source.onmessage = (msg) => onFrame(JSON.parse(msg.data) as Frame);
    source.addEventListener("finalized", () => {
      source.close();
      onEnd?.();
    });
    source.onerror = () => onError?.();
    return () => source.close();
  }
}

import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, parseNdjson, trajectoryFromNdjson } from "../src/api.js";
import type { MotionEvent } from "../src/types.js";
import * as fx from "./fixtures.js";

describe("wire-format parsers", () => {
  it("parses the events NDJSON into typed rows", () => {
    const events = parseNdjson<MotionEvent>(fx.raw("events.ndjson"));
    expect(events.length).toBeGreaterThan(0);
    for (const ev of events) {
      expect(typeof ev.start_t).toBe("number");
      expect(ev.end_t).toBeGreaterThan(ev.start_t);
      expect(ev.end_idx).toBeGreaterThan(ev.start_idx);
    }
  });

  it("parses trajectory NDJSON lines into polylines", () => {
    const polylines = trajectoryFromNdjson(fx.raw("trajectory.ndjson"));
    expect(polylines.length).toBeGreaterThan(0);
    const total = polylines.reduce((n, line) => n + line.length, 0);
    expect(total).toBe(fx.frames.length);
    for (const [t, x, y] of polylines[0].slice(0, 5)) {
      expect(Number.isFinite(t) && Number.isFinite(x) && Number.isFinite(y)).toBe(true);
    }
  });

  it("tolerates blank lines in NDJSON", () => {
    expect(parseNdjson("\n\n")).toEqual([]);
    expect(parseNdjson('{"a":1}\n\n{"a":2}\n')).toEqual([{ a: 1 }, { a: 2 }]);
  });

  it("live SSE frames share the frame schema", () => {
    const streamed = fx.liveFrames();
    expect(streamed.length).toBe(25);
    for (const f of streamed) {
      expect(typeof f.speed).toBe("number");
      expect(typeof f.in_gap).toBe("boolean");
    }
  });
});

describe("endpoint construction", () => {
  const calls: string[] = [];

  function stubFetch(body: string, json = true) {
    calls.length = 0;
    vi.stubGlobal("fetch", async (url: string) => {
      calls.push(url);
      return {
        ok: true,
        status: 200,
        json: async () => (json ? JSON.parse(body) : body),
        text: async () => body,
      } as unknown as Response;
    });
  }

  afterEach(() => vi.unstubAllGlobals());

  it("slider re-queries use the documented endpoints with half-open windows", async () => {
    const api = new ApiClient("");
    stubFetch("[]");
    await api.frames("s1", { from: 3.2, to: 17.8 }, 2);
    expect(calls[0]).toBe("/sessions/s1/frames?from=3.2&to=17.8&stride=2");
    stubFetch(fx.raw("heatmap.json"));
    await api.heatmap("s1", "dwell_time", 500, { from: 0, to: 10 });
    expect(calls[0]).toBe("/sessions/s1/heatmap?metric=dwell_time&sector=500&from=0&to=10");
    stubFetch(fx.raw("trajectory.ndjson"), false);
    await api.trajectory("s1", { from: 5, to: 12 });
    expect(calls[0]).toBe("/sessions/s1/trajectory?from=5&to=12");
    stubFetch(fx.raw("kpi.json"));
    await api.kpi("s1", { from: 0.5, to: 4.5 });
    expect(calls[0]).toBe("/sessions/s1/kpi?from=0.5&to=4.5");
    stubFetch(fx.raw("events.ndjson"), false);
    await api.events("s1", ["driving", "harsh_braking"]);
    expect(calls[0]).toBe("/sessions/s1/events?types=driving%2Charsh_braking");
  });
});

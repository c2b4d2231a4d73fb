#!/usr/bin/env python3
"""Record deterministic API fixtures for the web UI contract tests.

Runs the scripted movement scenario through a real in-process server and
captures the exact response bytes the UI consumes.  Re-run after changing any
wire format: python scripts/record_ui_fixtures.py
"""

from __future__ import annotations

import json
import os
import tempfile

from fastapi.testclient import TestClient

from truckmotion import serialize
from truckmotion.service import create_app
from truckmotion.synthlab import default_movement_script, gen_movement

OUT = os.path.join(os.path.dirname(__file__), "..", "frontend", "fixtures")


def main() -> None:
    os.makedirs(OUT, exist_ok=True)
    samples, _ = gen_movement(default_movement_script(), rate=25.0, noise_std=2.0, seed=17)
    lines = []
    for s in samples:
        rec = {"t": s.t, "x": s.x, "y": s.y, "z": s.z}
        if s.fork_z is not None:
            rec["fork_z"] = s.fork_z
        lines.append(serialize.dumps(rec))
    body = "\n".join(lines)

    def write(name: str, data: bytes) -> None:
        path = os.path.join(OUT, name)
        with open(path, "wb") as fh:
            fh.write(data)
        print(f"wrote {name} ({len(data)} bytes)")

    with tempfile.TemporaryDirectory() as root:
        app = create_app(root)
        with TestClient(app) as client:
            client.post("/sessions", json={"id": "fixture", "chain": {"resample_rate": 25.0}})
            client.post("/sessions/fixture/records", content=body)
            live = client.get("/sessions/fixture/live", params={"max_frames": 25})
            write("live.sse", live.content)
            client.post("/sessions/fixture/finalize")

            write("sessions.json", client.get("/sessions").content)
            write("frames.json", client.get("/sessions/fixture/frames").content)
            write("frames_window.json",
                  client.get("/sessions/fixture/frames",
                             params={"from": 5.0, "to": 12.0}).content)
            write("events.ndjson", client.get("/sessions/fixture/events").content)
            write("kpi.json", client.get("/sessions/fixture/kpi").content)
            write("kpi_window.json",
                  client.get("/sessions/fixture/kpi", params={"from": 0.5, "to": 4.5}).content)
            write("heatmap.json",
                  client.get("/sessions/fixture/heatmap",
                             params={"metric": "dwell_time", "sector": 500}).content)
            write("trajectory.ndjson", client.get("/sessions/fixture/trajectory").content)
            write("trajectory_window.ndjson",
                  client.get("/sessions/fixture/trajectory",
                             params={"from": 5.0, "to": 12.0}).content)
            reana = client.post("/sessions/fixture/reanalyze",
                                json={"limits": {"standstill_speed_below": 250.0}})
            write("reanalyze.json", reana.content)


if __name__ == "__main__":
    main()

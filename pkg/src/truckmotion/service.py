"""HTTP/stream API exposing sessions, frames, events, KPIs and heatmaps.

Sessions are either live (fed record by record, analyzed causally for the
monitor stream) or finalized (batch zero-phase analysis, persisted to the data
root).  Query endpoints are pure views: identical parameters on a finalized
session return byte-identical payloads, produced by the same serializers the
CLI uses.  Query windows are half-open [from, to) in seconds relative to the
session start.
"""

from __future__ import annotations

import asyncio
import itertools
import json
import os
import threading
from dataclasses import dataclass, field
from typing import Optional

from fastapi import Body, FastAPI, HTTPException, Query, Request, Response
from fastapi.responses import StreamingResponse

from . import serialize
from .analysis import AnalysisBundle, analyze_samples, write_artifacts
from .area import DEFAULT_SECTOR_MM, GridSpec, METRICS, build_heatmap, extract_trajectory
from .events import EventLimits, EventStack, EventType, default_limits, detect_events
from .ingest import LiveIngestSession, parse_log
from .kinematics import ChainConfig, KinematicFrame, StreamingChain, chain_defaults
from .kpi import compute_kpis

__all__ = ["create_app", "SessionStore"]

LIVE_BUFFER_FRAMES = 1000  # laggard clients are skipped forward past this


@dataclass
class Session:
    id: str
    chain: ChainConfig
    limits: EventLimits
    state: str = "live"  # live | finalized
    ingest: LiveIngestSession = field(default_factory=LiveIngestSession)
    streaming: StreamingChain | None = None
    live_frames: list[KinematicFrame] = field(default_factory=list)
    bundle: AnalysisBundle | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)
    cache: dict = field(default_factory=dict)
    log_path: str | None = None  # persisted finalized session, loaded lazily

    def info(self) -> dict:
        frames = self.frames()
        latest = frames[-1] if frames else None
        return {
            "id": self.id,
            "state": self.state,
            "frame_count": len(frames),
            "sample_count": len(self.ingest.buffer) if self.state == "live" else None,
            "dropped": self.ingest.dropped if self.state == "live" else None,
            "malformed": self.ingest.malformed if self.state == "live" else None,
            "latest": serialize.frame_to_dict(latest) if latest else None,
            "latency_s": self.streaming.latency_s if self.streaming and self.state == "live" else None,
        }

    def frames(self) -> list[KinematicFrame]:
        if self.state == "finalized":
            return self.ensure_bundle().frames
        with self.lock:
            return list(self.live_frames)

    def ensure_bundle(self) -> AnalysisBundle:
        if self.bundle is None:
            if self.log_path is None:
                raise HTTPException(409, "session has no recorded data")
            samples = parse_log(open(self.log_path, "rb").read(), "jsonl")
            self.bundle = analyze_samples(samples, self.chain, self.limits)
        return self.bundle

    def stack(self) -> EventStack:
        if self.state == "finalized":
            return self.ensure_bundle().stack
        frames = self.frames()
        if not frames:
            return EventStack([])
        return detect_events(frames, self.limits)


class SessionStore:
    def __init__(self, data_root: str):
        self.data_root = data_root
        self.sessions: dict[str, Session] = {}
        self._counter = itertools.count(1)
        self._lock = threading.Lock()
        os.makedirs(data_root, exist_ok=True)
        self._scan()

    def _scan(self) -> None:
        for name in sorted(os.listdir(self.data_root)):
            path = os.path.join(self.data_root, name)
            log = os.path.join(path, "log.jsonl")
            cfg = os.path.join(path, "config.json")
            if os.path.isfile(log) and os.path.isfile(cfg):
                with open(cfg, encoding="utf-8") as fh:
                    data = json.load(fh)
                self.sessions[name] = Session(
                    id=name,
                    chain=ChainConfig.from_dict(data.get("chain", {})),
                    limits=EventLimits.from_dict(data.get("limits", {})),
                    state="finalized",
                    log_path=log,
                )

    def create(self, session_id: str | None, chain: ChainConfig, limits: EventLimits) -> Session:
        with self._lock:
            sid = session_id or f"session-{next(self._counter):04d}"
            while session_id is None and sid in self.sessions:
                sid = f"session-{next(self._counter):04d}"
            if sid in self.sessions:
                raise HTTPException(409, f"session {sid!r} already exists")
            session = Session(id=sid, chain=chain, limits=limits,
                              streaming=StreamingChain(chain))
            self.sessions[sid] = session
            return session

    def get(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise HTTPException(404, f"unknown session {session_id!r}")
        return session


def _abs_window(frames: list[KinematicFrame], from_s: Optional[float], to_s: Optional[float],
                default: tuple[float, float]) -> tuple[float, float]:
    t0 = frames[0].t if frames else 0.0
    w0 = t0 + from_s if from_s is not None else default[0]
    w1 = t0 + to_s if to_s is not None else default[1]
    return (w0, w1)


def create_app(data_root: str = "./truckmotion-data") -> FastAPI:
    app = FastAPI(title="truckmotion", version="0.1.0")
    store = SessionStore(data_root)
    app.state.store = store

    def _cached(session: Session, key: tuple, build) -> bytes:
        if session.state != "finalized":
            return build()
        if key not in session.cache:
            session.cache[key] = build()
        return session.cache[key]

    @app.get("/sessions")
    def list_sessions() -> Response:
        infos = [store.sessions[k].info() for k in sorted(store.sessions)]
        return Response(serialize.dumps(infos), media_type="application/json")

    @app.post("/sessions", status_code=201)
    def create_session(body: dict = Body(default={})) -> Response:
        chain = ChainConfig.from_dict(body.get("chain", {})) if body.get("chain") else chain_defaults()
        try:
            limits = EventLimits.from_dict(body.get("limits", {})) if body.get("limits") else default_limits()
        except ValueError as exc:
            raise HTTPException(422, str(exc)) from None
        session = store.create(body.get("id"), chain, limits)
        return Response(serialize.dumps(session.info()), media_type="application/json",
                        status_code=201)

    @app.get("/sessions/{sid}")
    def session_info(sid: str) -> Response:
        return Response(serialize.dumps(store.get(sid).info()), media_type="application/json")

    @app.post("/sessions/{sid}/records")
    async def push_records(sid: str, request: Request) -> Response:
        session = store.get(sid)
        if session.state != "live":
            raise HTTPException(409, "session is finalized")
        body = (await request.body()).decode("utf-8")
        accepted = 0
        with session.lock:
            before_drop = session.ingest.dropped
            before_bad = session.ingest.malformed
            for line in body.splitlines():
                if not line.strip():
                    continue
                sample = session.ingest.feed_line(line)
                if sample is not None:
                    accepted += 1
                    session.live_frames.extend(session.streaming.push(sample))
        return Response(serialize.dumps({
            "accepted": accepted,
            "dropped": session.ingest.dropped - before_drop,
            "malformed": session.ingest.malformed - before_bad,
        }), media_type="application/json")

    @app.post("/sessions/{sid}/finalize")
    def finalize_session(sid: str) -> Response:
        session = store.get(sid)
        if session.state != "live":
            raise HTTPException(409, "session is already finalized")
        with session.lock:
            samples = session.ingest.finalize()
            if len(samples) < 2:
                raise HTTPException(409, "not enough samples to finalize")
            session.bundle = analyze_samples(samples, session.chain, session.limits)
            out_dir = os.path.join(store.data_root, session.id)
            os.makedirs(out_dir, exist_ok=True)
            with open(os.path.join(out_dir, "log.jsonl"), "w", encoding="utf-8") as fh:
                for s in samples:
                    rec = {"t": s.t, "x": s.x, "y": s.y, "z": s.z}
                    if s.fork_z is not None:
                        rec["fork_z"] = s.fork_z
                    if s.source_id != "default":
                        rec["id"] = s.source_id
                    fh.write(serialize.dumps(rec) + "\n")
            with open(os.path.join(out_dir, "config.json"), "w", encoding="utf-8") as fh:
                fh.write(serialize.dumps({"chain": session.chain.to_dict(),
                                          "limits": session.limits.to_dict()}))
            write_artifacts(session.bundle, out_dir, figures=False)
            session.state = "finalized"
        return Response(serialize.dumps(session.info()), media_type="application/json")

    @app.get("/sessions/{sid}/frames")
    def get_frames(sid: str, from_s: Optional[float] = Query(default=None, alias="from"),
                   to_s: Optional[float] = Query(default=None, alias="to"),
                   stride: int = Query(default=1, ge=1),
                   format: str = Query(default="json")) -> Response:
        session = store.get(sid)
        frames = session.frames()
        if not frames:
            raise HTTPException(409, "session has no frames yet")

        def build() -> bytes:
            if len(frames) > 1:
                dt = (frames[-1].t - frames[0].t) / (len(frames) - 1)
            else:
                dt = 0.0
            w0, w1 = _abs_window(frames, from_s, to_s, (frames[0].t, frames[-1].t + dt))
            subset = [f for f in frames if w0 <= f.t < w1][::stride]
            if format == "csv":
                return serialize.frames_to_csv(subset).encode()
            return serialize.frames_to_json(subset).encode()

        payload = _cached(session, ("frames", from_s, to_s, stride, format), build)
        media = "text/csv" if format == "csv" else "application/json"
        return Response(payload, media_type=media)

    @app.get("/sessions/{sid}/events")
    def get_events(sid: str, types: Optional[str] = None) -> Response:
        session = store.get(sid)

        def build() -> bytes:
            stack = session.stack()
            if types:
                wanted = {EventType(v) for v in types.split(",")}
                stack = EventStack([e for e in stack if e.type in wanted])
            return serialize.stack_to_jsonl(stack).encode()

        payload = _cached(session, ("events", types), build)
        return Response(payload, media_type="application/x-ndjson")

    @app.get("/sessions/{sid}/kpi")
    def get_kpi(sid: str, from_s: Optional[float] = Query(default=None, alias="from"),
                to_s: Optional[float] = Query(default=None, alias="to")) -> Response:
        session = store.get(sid)
        frames = session.frames()
        if not frames:
            raise HTTPException(409, "session has no frames yet")

        def build() -> bytes:
            window = _abs_window(frames, from_s, to_s, (frames[0].t, frames[-1].t))
            try:
                report = compute_kpis(session.stack(), frames, window)
            except ValueError as exc:
                raise HTTPException(422, str(exc)) from None
            return serialize.kpi_to_json(report).encode()

        payload = _cached(session, ("kpi", from_s, to_s), build)
        return Response(payload, media_type="application/json")

    @app.get("/sessions/{sid}/heatmap")
    def get_heatmap(sid: str, metric: str = "dwell_time",
                    sector: float = Query(default=DEFAULT_SECTOR_MM, gt=0),
                    from_s: Optional[float] = Query(default=None, alias="from"),
                    to_s: Optional[float] = Query(default=None, alias="to")) -> Response:
        session = store.get(sid)
        if metric not in METRICS:
            raise HTTPException(422, f"unknown metric {metric!r}")
        frames = session.frames()
        if not frames:
            raise HTTPException(409, "session has no frames yet")

        def build() -> bytes:
            if len(frames) > 1:
                dt = (frames[-1].t - frames[0].t) / (len(frames) - 1)
            else:
                dt = 0.0
            window = _abs_window(frames, from_s, to_s, (frames[0].t, frames[-1].t + dt))
            grid = GridSpec.covering(frames, sector)
            try:
                layer = build_heatmap(frames, grid, metric, window)
            except ValueError as exc:
                raise HTTPException(422, str(exc)) from None
            return serialize.heatmap_to_json(layer).encode()

        payload = _cached(session, ("heatmap", metric, sector, from_s, to_s), build)
        return Response(payload, media_type="application/json")

    @app.get("/sessions/{sid}/trajectory")
    def get_trajectory(sid: str, from_s: Optional[float] = Query(default=None, alias="from"),
                       to_s: Optional[float] = Query(default=None, alias="to")) -> Response:
        session = store.get(sid)
        frames = session.frames()
        if not frames:
            raise HTTPException(409, "session has no frames yet")

        def build() -> bytes:
            if len(frames) > 1:
                dt = (frames[-1].t - frames[0].t) / (len(frames) - 1)
            else:
                dt = 0.0
            window = _abs_window(frames, from_s, to_s, (frames[0].t, frames[-1].t + dt))
            return serialize.trajectory_to_jsonl(extract_trajectory(frames, window)).encode()

        payload = _cached(session, ("trajectory", from_s, to_s), build)
        return Response(payload, media_type="application/x-ndjson")

    @app.post("/sessions/{sid}/reanalyze")
    def reanalyze(sid: str, body: dict = Body(default={})) -> Response:
        """Pure re-analysis view with overridden event limits (session unchanged)."""
        session = store.get(sid)
        frames = session.frames()
        if not frames:
            raise HTTPException(409, "session has no frames yet")

        key = ("reanalyze", serialize.dumps(body))

        def build() -> bytes:
            try:
                limits = EventLimits.from_dict(body.get("limits", {}))
            except ValueError as exc:
                raise HTTPException(422, str(exc)) from None
            stack = detect_events(frames, limits)
            report = compute_kpis(stack, frames)
            return serialize.dumps({
                "events": [serialize.event_to_dict(e) for e in stack],
                "kpi": report.to_dict(),
            }).encode()

        return Response(_cached(session, key, build), media_type="application/json")

    @app.get("/sessions/{sid}/live")
    async def live_stream(sid: str, max_frames: Optional[int] = Query(default=None, ge=1)
                          ) -> StreamingResponse:
        session = store.get(sid)

        async def gen():
            cursor = 0
            sent = 0
            while True:
                with session.lock:
                    frames = session.live_frames if session.state == "live" else []
                    total = len(frames)
                    if total - cursor > LIVE_BUFFER_FRAMES:
                        cursor = total - LIVE_BUFFER_FRAMES  # drop oldest for laggards
                    chunk = [serialize.frame_to_dict(f) for f in frames[cursor:total]]
                    state = session.state
                cursor = total
                for d in chunk:
                    yield f"data: {serialize.dumps(d)}\n\n"
                    sent += 1
                    if max_frames is not None and sent >= max_frames:
                        return
                if state != "live":
                    yield "event: finalized\ndata: {}\n\n"
                    return
                await asyncio.sleep(0.05)

        return StreamingResponse(gen(), media_type="text/event-stream")

    frontend_dist = os.path.join(os.path.dirname(__file__), "..", "..", "frontend")
    for candidate in (os.environ.get("TRUCKMOTION_UI", ""), frontend_dist):
        if candidate and os.path.isdir(candidate) and os.path.isfile(os.path.join(candidate, "index.html")):
            from fastapi.staticfiles import StaticFiles

            app.mount("/ui", StaticFiles(directory=candidate, html=True), name="ui")
            break

    return app

"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
report.  Criterion 3's saturation-band assertion is known-failing: with the
pinned filter designs the zero-phase FIR/Butterworth mean-speed ratio at 5 Hz
is about 2.2x regardless of noise scale, so no configuration can put FIR in
the 600..1000 mm/s band while Butterworth stays at or below 200 mm/s.  The
assertion is kept faithful instead of being loosened; see the analysis in the
project notes.  The web-UI contract criterion lives in frontend/tests.
"""

from __future__ import annotations

import json
import time
from dataclasses import replace

import numpy as np
import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

import truckmotion as tm
from truckmotion import serialize
from truckmotion.cli import main as cli_main
from truckmotion.events import EventType
from truckmotion.filters import FilterConfig, apply_zero_phase, design, differentiate
from truckmotion.ingest import live_ingest, parse_log
from truckmotion.kinematics import frames_to_arrays
from truckmotion.kpi import DRIVING_LIKE
from truckmotion.service import create_app
from truckmotion.synthlab import (
    ManipulationSpec,
    default_movement_script,
    gen_movement,
    gen_static,
    manipulate,
    run_static_sweep,
)

RATES = [5.0, 10.0, 25.0, 50.0, 100.0]
SCATTERS = [0.0, 20.0, 100.0, 180.0, 200.0]


def report(criterion: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {criterion}" + (f": {detail}" if detail else ""))


@pytest.fixture(scope="module")
def sweep():
    rows = run_static_sweep(RATES, SCATTERS, seed=0, duration=60.0)
    return {(r["rate_hz"], r["scatter_mm"], r["filter"]): r["mean_speed_mm_s"] for r in rows}


@pytest.fixture(scope="module")
def movement():
    samples, truth = gen_movement(default_movement_script(), rate=100.0, noise_std=5.0, seed=1)
    frames = tm.process_chain(samples)
    stack = tm.detect_events(frames)
    return samples, truth, frames, stack


def test_criterion_1_static_anchor_and_sweep(sweep):
    t0 = time.perf_counter()
    base = gen_static(60.0, 100.0, 2.0, seed=0)
    degraded = manipulate(base, ManipulationSpec(target_rate=5.0, scatter_std=200.0, seed=0))
    frames = tm.process_chain(degraded, tm.chain_defaults())
    anchor = float(frames_to_arrays(frames)["speed"].mean())
    elapsed = time.perf_counter() - t0

    worst = max(((cell, v) for cell, v in sweep.items() if cell[2] == "butterworth"),
                key=lambda kv: kv[1])
    ok = anchor <= 200.0 and elapsed < 5.0 and worst[1] <= 200.0
    report("criterion 1: static anchor <= 200 mm/s and sweep bound", ok,
           f"anchor={anchor:.1f} mm/s in {elapsed:.2f} s; "
           f"sweep worst={worst[1]:.1f} at {worst[0][:2]}")
    assert anchor <= 200.0
    assert elapsed < 5.0
    assert worst[1] <= 200.0


def test_criterion_2_zero_scatter(sweep):
    values = {(r, f): sweep[(r, 0.0, f)] for r in RATES
              for f in ("butterworth", "fir", "savgol")}
    worst_cell, worst = max(values.items(), key=lambda kv: kv[1])
    report("criterion 2: zero-scatter mean speed < 20 mm/s for all filters/rates",
           worst < 20.0, f"worst={worst:.1f} mm/s at {worst_cell}")
    assert worst < 20.0


def test_criterion_3_filter_ordering(sweep):
    ratios = []
    for scatter in (180.0, 200.0):
        butter = sweep[(5.0, scatter, "butterworth")]
        for kind in ("fir", "savgol"):
            ratios.append((kind, scatter, sweep[(5.0, scatter, kind)] / butter))
    ok = all(r >= 2.0 for _, _, r in ratios)
    report("criterion 3a: FIR and Savitzky-Golay >= 2x Butterworth at (5 Hz, 180-200 mm)",
           ok, ", ".join(f"{k}@{s:g}mm={r:.2f}x" for k, s, r in ratios))
    assert ok


def test_criterion_3_fir_saturation_band(sweep):
    # Known-failing: see module docstring.  The assertion is the faithful
    # 800 mm/s +/- 25 % reproduction check.
    fir = max(sweep[(5.0, 180.0, "fir")], sweep[(5.0, 200.0, "fir")])
    ok = 600.0 <= fir <= 1000.0
    report("criterion 3b: FIR approaches 800 mm/s saturation within 25 %", ok,
           f"fir={fir:.1f} mm/s (unreachable jointly with criterion 1; ratio to "
           f"Butterworth is design-pinned near 2.2x)")
    assert 600.0 <= fir <= 1000.0


def test_criterion_4_movement_detection(movement):
    _, truth, _, stack = movement
    q = tm.evaluate_detection(stack, truth)
    recalls = {k.value: q.per_type[k].recall
               for k in (EventType.HARSH_BRAKING, EventType.STRONG_ACCELERATION,
                         EventType.STANDSTILL)}
    med = q.median_boundary_delta()
    ok = all(r == 1.0 for r in recalls.values()) and med <= 0.5
    report("criterion 4: movement-scenario recalls 1.0, median boundary delta <= 0.5 s",
           ok, f"recalls={recalls}, median delta={med:.3f} s")
    assert all(r == 1.0 for r in recalls.values())
    assert med <= 0.5


def test_criterion_5_property_suite(movement):
    samples, truth, frames, stack = movement
    notes = []

    # zero-phase symmetry and DC fixed points
    rng = np.random.default_rng(0)
    walk = np.cumsum(rng.normal(0, 10, 2000))
    for kind in ("butterworth", "fir", "savgol"):
        coeffs = design(FilterConfig(kind=kind), 100.0)
        const = apply_zero_phase(coeffs, np.full(400, 321.0))
        assert np.allclose(const, 321.0, rtol=1e-9)
        fwd = apply_zero_phase(coeffs, walk)
        rev = apply_zero_phase(coeffs, walk[::-1])[::-1]
        assert np.abs(fwd - rev)[400:-400].max() <= 1e-9 * np.abs(walk).max()
    notes.append("filters")

    # differentiation against the analytic oracle
    t = np.arange(2000) / 100.0
    d = differentiate(np.sin(2 * np.pi * 0.5 * t), 100.0)
    ref = np.pi * np.cos(2 * np.pi * 0.5 * t)
    assert np.abs(d - ref).max() / np.abs(ref).max() < 1e-3
    notes.append("differentiation")

    # chain translation/rotation invariance
    small = gen_static(15.0, 100.0, 8.0, seed=2)
    a = frames_to_arrays(tm.process_chain(small))["speed"]
    shifted = [replace(s, x=s.x + 5e4, y=s.y - 2e4) for s in small]
    b = frames_to_arrays(tm.process_chain(shifted))["speed"]
    assert np.abs(a - b).max() <= 1e-9 * max(a.max(), 1.0)
    th = 1.1
    rot = [replace(s, x=s.x * np.cos(th) - s.y * np.sin(th),
                   y=s.x * np.sin(th) + s.y * np.cos(th)) for s in small]
    c = frames_to_arrays(tm.process_chain(rot))["speed"]
    assert np.abs(a - c).max() <= 1e-6 * max(a.max(), 1.0)
    notes.append("chain invariance")

    # event exclusivity, pruning soundness, determinism
    cover = np.zeros(len(frames), dtype=int)
    limits = tm.default_limits()
    for ev in stack.exclusive():
        cover[ev.start_idx:ev.end_idx] += 1
        assert ev.duration >= limits.min_duration(ev.type) - 1e-9
    assert cover.max() <= 1
    assert tm.detect_events(frames).events == stack.events
    notes.append("events")

    # KPI bounds and event-aligned additivity
    kpi = tm.compute_kpis(stack, frames)
    w0, w1 = kpi.window
    assert 0.0 <= kpi.equipment_utilization <= 1.0
    assert kpi.total_standstill_time + kpi.total_driving_time <= (w1 - w0) + 1e-9
    exclusive = stack.exclusive()
    cut = (exclusive[1].end_t + exclusive[2].start_t) / 2.0
    left = tm.compute_kpis(stack, frames, (w0, cut))
    right = tm.compute_kpis(stack, frames, (cut, w1))
    assert left.total_driving_time + right.total_driving_time == pytest.approx(
        kpi.total_driving_time, abs=1e-6)
    assert left.total_standstill_time + right.total_standstill_time == pytest.approx(
        kpi.total_standstill_time, abs=1e-6)
    notes.append("kpi")

    # heatmap dwell conservation and refinement consistency
    grid = tm.GridSpec.covering(frames, 500.0)
    layer = tm.build_heatmap(frames, grid, "dwell_time")
    assert layer.values.sum() + layer.out_of_grid_dwell == pytest.approx(
        layer.window[1] - layer.window[0], abs=0.011)
    fine = tm.build_heatmap(frames, tm.GridSpec(grid.origin_x, grid.origin_y, 250.0,
                                                grid.cols * 2, grid.rows * 2), "dwell_time")
    agg = fine.values.reshape(grid.rows, 2, grid.cols, 2).sum(axis=(1, 3))
    np.testing.assert_allclose(agg, layer.values, atol=0.011)
    notes.append("heatmap")

    # batch/stream ingest equivalence
    lines = []
    for s in samples[:1000]:
        rec = {"t": s.t, "x": s.x, "y": s.y, "z": s.z}
        if s.fork_z is not None:
            rec["fork_z"] = s.fork_z
        lines.append(json.dumps(rec))
    text = "\n".join(lines)
    assert live_ingest(text.splitlines()).buffer == parse_log(text, "jsonl")
    notes.append("ingest equivalence")

    # seed determinism of all generators
    assert gen_static(5.0, 50.0, 2.0, seed=9) == gen_static(5.0, 50.0, 2.0, seed=9)
    m1 = gen_movement(default_movement_script(), 50.0, 2.0, seed=9)
    m2 = gen_movement(default_movement_script(), 50.0, 2.0, seed=9)
    assert m1[0] == m2[0] and m1[1].events == m2[1].events
    s1 = manipulate(gen_static(5.0, 50.0, 0.0, seed=1),
                    ManipulationSpec(target_rate=10.0, scatter_std=30.0, seed=4))
    s2 = manipulate(gen_static(5.0, 50.0, 0.0, seed=1),
                    ManipulationSpec(target_rate=10.0, scatter_std=30.0, seed=4))
    assert s1 == s2
    notes.append("determinism")

    report("criterion 5: property suite", True, ", ".join(notes))


def test_criterion_6_cli_api_equivalence(tmp_path):
    samples, _ = gen_movement(default_movement_script(), rate=50.0, noise_std=2.0, seed=17)
    lines = []
    for s in samples:
        rec = {"t": s.t, "x": s.x, "y": s.y, "z": s.z}
        if s.fork_z is not None:
            rec["fork_z"] = s.fork_z
        lines.append(serialize.dumps(rec))
    log_text = "\n".join(lines) + "\n"
    log_path = tmp_path / "run.jsonl"
    log_path.write_text(log_text)

    out_dir = tmp_path / "cli-out"
    result = CliRunner().invoke(cli_main, ["analyze", str(log_path), "--out", str(out_dir),
                                           "--no-figures"], catch_exceptions=False)
    assert result.exit_code == 0

    app = create_app(str(tmp_path / "data"))
    with TestClient(app) as client:
        client.post("/sessions", json={"id": "eq"})
        r = client.post("/sessions/eq/records", content=log_text)
        assert r.json()["malformed"] == 0 and r.json()["dropped"] == 0
        client.post("/sessions/eq/finalize")

        pairs = [
            ("frames.csv", "/sessions/eq/frames", {"format": "csv"}),
            ("events.jsonl", "/sessions/eq/events", {}),
            ("kpi.json", "/sessions/eq/kpi", {}),
            ("trajectory.jsonl", "/sessions/eq/trajectory", {}),
            ("heatmap_dwell_time.json", "/sessions/eq/heatmap", {"metric": "dwell_time"}),
            ("heatmap_max_speed.json", "/sessions/eq/heatmap", {"metric": "max_speed"}),
            ("heatmap_max_accel.json", "/sessions/eq/heatmap", {"metric": "max_accel"}),
        ]
        mismatches = []
        for name, path, params in pairs:
            artifact = (out_dir / name).read_bytes()
            response = client.get(path, params=params).content
            if artifact != response:
                mismatches.append(name)
    report("criterion 6: CLI artifacts byte-equal to API responses",
           not mismatches, f"{len(pairs)} artifact kinds compared"
           + (f"; mismatches: {mismatches}" if mismatches else ""))
    assert not mismatches

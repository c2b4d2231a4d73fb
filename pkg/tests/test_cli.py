from __future__ import annotations

import json
import os

import pytest
from click.testing import CliRunner

from truckmotion.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def _run(runner, args):
    return runner.invoke(main, args, catch_exceptions=False)


class TestSynthCommands:
    def test_static_log_then_analyze(self, runner, tmp_path):
        log = tmp_path / "static.csv"
        out = tmp_path / "report"
        r = _run(runner, ["synth", "static", "--duration", "20", "--out", str(log)])
        assert r.exit_code == 0
        r = _run(runner, ["analyze", str(log), "--out", str(out), "--no-figures"])
        assert r.exit_code == 0
        kpi = json.loads((out / "kpi.json").read_text())
        assert kpi["total_driving_time"] == 0.0
        assert kpi["no_driving"] is True
        for name in ("frames.csv", "events.jsonl", "trajectory.jsonl",
                     "heatmap_dwell_time.json", "heatmap_max_speed.json",
                     "heatmap_max_accel.json"):
            assert (out / name).is_file()

    def test_movement_log_has_harsh_braking(self, runner, tmp_path):
        log = tmp_path / "run.jsonl"
        truth = tmp_path / "truth.jsonl"
        out = tmp_path / "report"
        r = _run(runner, ["synth", "movement", "--rate", "50", "--out", str(log),
                          "--truth", str(truth)])
        assert r.exit_code == 0
        assert truth.is_file()
        r = _run(runner, ["analyze", str(log), "--out", str(out), "--no-figures"])
        assert r.exit_code == 0
        events = [json.loads(ln) for ln in (out / "events.jsonl").read_text().splitlines()]
        assert events
        assert any(e["type"] == "harsh_braking" for e in events)

    def test_movement_custom_script(self, runner, tmp_path):
        script = tmp_path / "script.json"
        script.write_text(json.dumps({
            "start": [0, 0],
            "phases": [
                {"label": "standstill", "duration": 3.0},
                {"label": "maneuvering", "duration": 1.0, "accel": 200.0,
                 "heading": [1, 0]},
                {"label": "maneuvering", "duration": 1.0, "accel": -200.0},
                {"label": "standstill", "duration": 3.0},
            ],
        }))
        log = tmp_path / "run.jsonl"
        r = _run(runner, ["synth", "movement", "--script", str(script), "--out", str(log)])
        assert r.exit_code == 0
        assert log.is_file()

    def test_figures_rendered(self, runner, tmp_path):
        log = tmp_path / "static.csv"
        out = tmp_path / "report"
        _run(runner, ["synth", "static", "--duration", "15", "--out", str(log)])
        r = _run(runner, ["analyze", str(log), "--out", str(out), "--figures"])
        assert r.exit_code == 0
        for name in ("trajectory.png", "heatmap_dwell_time.png", "events.png"):
            assert (out / name).stat().st_size > 0


class TestAnalyzeErrors:
    def test_missing_input_names_path(self, runner, tmp_path):
        missing = tmp_path / "nope.csv"
        r = runner.invoke(main, ["analyze", str(missing)])
        assert r.exit_code != 0
        assert str(missing) in r.output

    def test_bad_config_fails(self, runner, tmp_path):
        log = tmp_path / "static.csv"
        _run(runner, ["synth", "static", "--duration", "10", "--out", str(log)])
        cfg = tmp_path / "cfg.json"
        cfg.write_text('{"limits": {"standstill_speed_below": 1e9}}')
        r = runner.invoke(main, ["analyze", str(log), "--config", str(cfg)])
        assert r.exit_code != 0

    def test_config_overrides_applied(self, runner, tmp_path):
        log = tmp_path / "static.csv"
        out = tmp_path / "rep"
        _run(runner, ["synth", "static", "--duration", "10", "--out", str(log)])
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"chain": {"resample_rate": 50.0}}))
        r = _run(runner, ["analyze", str(log), "--config", str(cfg),
                          "--out", str(out), "--no-figures"])
        assert r.exit_code == 0
        header, first, *_ = (out / "frames.csv").read_text().splitlines()
        second = (out / "frames.csv").read_text().splitlines()[2]
        dt = float(second.split(",")[0]) - float(first.split(",")[0])
        assert dt == pytest.approx(1 / 50.0)


class TestStaticBench:
    def test_small_spec_csv(self, runner, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({
            "rates": [5, 25], "scatters": [0, 200], "duration": 20.0, "seed": 3,
        }))
        out = tmp_path / "sweep.csv"
        r = _run(runner, ["static-bench", str(spec), "--out", str(out)])
        assert r.exit_code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "rate_hz,scatter_mm,filter,mean_speed_mm_s"
        assert len(lines) == 1 + 2 * 2 * 3

    def test_deterministic_bytes(self, runner, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"rates": [10], "scatters": [50], "duration": 10.0,
                                    "seed": 5}))
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert _run(runner, ["static-bench", str(spec), "--out", str(a)]).exit_code == 0
        assert _run(runner, ["static-bench", str(spec), "--out", str(b)]).exit_code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_figure_rendering(self, runner, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"rates": [10], "scatters": [0, 100], "duration": 10.0}))
        out, fig = tmp_path / "s.csv", tmp_path / "s.png"
        r = _run(runner, ["static-bench", str(spec), "--out", str(out),
                          "--figure", str(fig)])
        assert r.exit_code == 0
        assert fig.stat().st_size > 0

    def test_missing_spec_file(self, runner, tmp_path):
        r = runner.invoke(main, ["static-bench", str(tmp_path / "none.json")])
        assert r.exit_code != 0

    def test_default_benchmark_grid_is_75_rows(self, runner, tmp_path):
        out = tmp_path / "sweep.csv"
        r = _run(runner, ["static-bench", "--out", str(out), "--seed", "0"])
        assert r.exit_code == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 1 + 5 * 5 * 3
        worst_butter = max(
            float(ln.split(",")[3]) for ln in lines[1:] if ln.split(",")[2] == "butterworth"
        )
        assert worst_butter <= 200.0

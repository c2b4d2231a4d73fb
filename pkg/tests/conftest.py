from __future__ import annotations

import numpy as np
import pytest

import truckmotion as tm
from truckmotion.synthlab import default_movement_script, ideal_kinematics


@pytest.fixture(scope="session")
def movement_run():
    """Default scripted scenario processed once for the whole suite."""
    script = default_movement_script()
    samples, truth = tm.gen_movement(script, rate=100.0, noise_std=2.0, seed=3)
    frames = tm.process_chain(samples)
    stack = tm.detect_events(frames)
    ideal = ideal_kinematics(script, 100.0)
    return {
        "script": script,
        "samples": samples,
        "truth": truth,
        "frames": frames,
        "stack": stack,
        "ideal": ideal,
    }


@pytest.fixture(scope="session")
def static_run():
    """60 s rig-noise static log with default-chain frames."""
    samples = tm.gen_static(60.0, 100.0, 2.0, seed=11)
    frames = tm.process_chain(samples)
    return {"samples": samples, "frames": frames}


def synth_frames(speed: np.ndarray, rate: float = 100.0,
                 accel: np.ndarray | None = None,
                 fork_v: np.ndarray | None = None,
                 in_gap: np.ndarray | None = None) -> list[tm.KinematicFrame]:
    """Hand-built frame lists for targeted event-detection cases."""
    n = len(speed)
    if accel is None:
        accel = np.zeros(n)
    x = np.cumsum(speed) / rate
    return [
        tm.KinematicFrame(
            t=k / rate, x=float(x[k]), y=0.0, z=0.0,
            vx=float(speed[k]), vy=0.0,
            speed=float(speed[k]), accel=float(accel[k]),
            fork_v=float(fork_v[k]) if fork_v is not None else None,
            in_gap=bool(in_gap[k]) if in_gap is not None else False,
        )
        for k in range(n)
    ]

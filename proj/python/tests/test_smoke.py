import json

import numpy as np
import pytest

import npin


def test_defaults_and_policies():
    cfg = npin.default_config("area_clearing")
    assert cfg["kind"] == "area_clearing"
    assert cfg["workspace_width"] == 12.0
    assert {"dt_descent", "random", "gtsp"} <= set(npin.policy_names())


def test_observation_channels():
    env = npin.Env("maze", seed=3)
    obs = env.reset()
    assert set(obs) == {"static_occupancy", "movable_occupancy", "robot_footprint", "goal_dt"}
    for arr in obs.values():
        assert arr.shape == (64, 64)
        assert arr.dtype == np.float32
        assert 0.0 <= arr.min() and arr.max() <= 1.0
    assert obs["robot_footprint"].sum() > 0


def test_step_and_metrics():
    env = npin.Env("maze", layout="open", obstacle_count=0, seed=1)
    env.reset()
    obs, reward, status = env.step({"omega": 0.0})
    assert status["steps"] == 1
    # driving straight at the goal is progress
    assert reward["progress"] > 0.0
    m = env.metrics()
    assert m["navigation"] is True
    assert m["l0"] > 0.0


def test_same_seed_same_world():
    a = npin.Env("box_delivery", seed=9)
    b = npin.Env("box_delivery", seed=9)
    assert json.dumps(a.world()) == json.dumps(b.world())
    c = npin.Env("box_delivery", seed=10)
    assert json.dumps(a.world()) != json.dumps(c.world())


def test_errors_surface_as_python_exceptions():
    with pytest.raises(npin.ConfigError):
        npin.Env("maze", concentration=0.9)
    env = npin.Env("maze")
    with pytest.raises(npin.ContractViolation):
        env.step({"heading": 1.0})


def test_batch_run_and_replay(tmp_path):
    out = npin.run("area_clearing", policy="gtsp", episodes=2, base_seed=4, output_dir=tmp_path,
                   action_mode="waypoint", box_count=4)
    assert len(out["episodes"]) == 2
    assert all(e["S"] == 1.0 for e in out["episodes"])
    assert (tmp_path / "summary.csv").exists()
    assert npin.replay(tmp_path / "episodes.jsonl") == 2

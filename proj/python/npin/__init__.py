"""Python access to the npin benchmark core.

>>> env = npin.Env("maze", seed=3)
>>> obs = env.reset()
>>> obs, reward, status = env.step({"omega": 0.2})
"""

import json

from . import _core
from ._core import ConfigError, ContractViolation, DivergenceError, episode_seed, policy_names

__all__ = [
    "ConfigError",
    "ContractViolation",
    "DivergenceError",
    "Env",
    "default_config",
    "episode_seed",
    "policy_names",
    "replay",
    "run",
]


def default_config(kind="maze"):
    return json.loads(_core.default_config(kind))


def _config(kind, overrides):
    cfg = {"kind": kind}
    cfg.update(overrides)
    return json.dumps(cfg)


class Env:
    """One environment instance; observations are dicts of float32 arrays."""

    def __init__(self, kind="maze", **overrides):
        self._env = _core.Env(_config(kind, overrides))

    def reset(self, seed=None):
        return self._env.reset() if seed is None else self._env.reset_seed(seed)

    def observe(self):
        return self._env.observe()

    def step(self, action):
        obs, meta = self._env.step(json.dumps(action))
        meta = json.loads(meta)
        return obs, meta["reward"], meta["status"]

    @property
    def config(self):
        return json.loads(self._env.config())

    @property
    def status(self):
        return json.loads(self._env.status())

    def world(self):
        return json.loads(self._env.world())

    def metrics(self):
        """Scores of the trajectory so far, as the metrics module computes them."""
        return json.loads(self._env.metrics())


def run(kind="maze", policy="dt_descent", episodes=10, base_seed=0, output_dir="", workers=1,
        policy_params=None, **overrides):
    out = _core.run(_config(kind, overrides), policy, episodes, base_seed, str(output_dir), workers,
                    json.dumps(policy_params or {}))
    return json.loads(out)


def replay(path):
    """Re-simulates every episode in an episodes.jsonl; raises DivergenceError on a mismatch."""
    return _core.replay_jsonl(str(path))

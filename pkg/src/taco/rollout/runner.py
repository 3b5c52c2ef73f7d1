"""Receding-horizon execution of chunked policies.

Each query predicts a fresh chunk with the latent at zero; only the first
``exec_len`` actions are executed before requerying, and no action from a
stale chunk survives a requery. Termination happens tick-by-tick, so a
success inside a chunk stops execution immediately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..data.normalize import apply_normalization
from ..training.checkpoint import LoadedPolicy, load_checkpoint
from ..training.pipeline import observation_to_batch
from .expert import make_expert
from .observe import ObservationRig
from .sensor_models import SyntheticSensorModel


@dataclass
class RolloutResult:
    success: bool
    partial: bool
    query_count: int
    executed_ticks: int
    aborted: bool = False
    label: str = "default"
    trajectory: list[dict] = field(default_factory=list)


class CheckpointPolicy:
    """Chunk predictor backed by a trained checkpoint."""

    def __init__(self, loaded: LoadedPolicy | str):
        self.loaded = loaded if isinstance(loaded, LoadedPolicy) else load_checkpoint(loaded)
        cfg = self.loaded.policy_config
        self.chunk_len = cfg.chunk_len
        self.exec_len = cfg.exec_len
        self.action_dim = cfg.action_dim

    def predict_chunk(self, fields: dict, state=None) -> np.ndarray:
        batch = observation_to_batch(
            None, fields, self.loaded.stats, self.loaded.obs_spec, self.loaded.sensor_mode
        )
        pred = self.loaded.model.predict(batch)[0].numpy()
        return apply_normalization(pred, self.loaded.stats, "actions", "inverse")


class ScriptedChunkPolicy:
    """Harness sanity stub: replans by rolling the expert forward in sim.

    Uses privileged environment state, so it is only a test oracle for the
    receding-horizon machinery, never a baseline.
    """

    def __init__(self, env, seed: int = 0, chunk_len: int = 64, exec_len: int = 32):
        self.env = env
        self.expert = make_expert(env, seed)
        self.chunk_len = chunk_len
        self.exec_len = exec_len
        self.action_dim = env.action_dim

    def predict_chunk(self, fields: dict, state=None) -> np.ndarray:
        if state is None:
            raise ValueError("scripted stub needs privileged state")
        actions = []
        sim_state = state
        for _ in range(self.chunk_len):
            a = self.expert.action(sim_state)
            actions.append(np.asarray(a, dtype=np.float64))
            sim_state, _ = self.env.step(sim_state, a)
        return np.stack(actions)


def run_receding_horizon(
    policy,
    env,
    max_ticks: int,
    seed: int = 0,
    label: str | None = None,
    exec_len: int | None = None,
    sensor_model: SyntheticSensorModel | None = None,
) -> RolloutResult:
    """Roll one episode; returns success/partial flags and the trajectory."""
    exec_len = exec_len or policy.exec_len
    if exec_len < 1:
        raise ValueError("exec_len must be positive")
    model = sensor_model or SyntheticSensorModel(kind="force_3axis", noise_std=0.05)
    state = env.reset(seed, label)
    rig = ObservationRig(env, model, seed=seed)

    trajectory: list[dict] = []
    queries = 0
    t = 0
    aborted = False
    while t < max_ticks and not env.is_success(state):
        chunk = policy.predict_chunk(rig.fields(state), state=state)
        queries += 1
        if not np.all(np.isfinite(chunk)):
            aborted = True
            break
        for j in range(exec_len):
            if t >= max_ticks or env.is_success(state):
                break
            action = chunk[j]
            state, rec = env.step(state, action)
            rig.advance(rec.contact)
            t += 1
            row = {"t": t, "action": [round(float(a), 5) for a in action]}
            row.update(env.summary(state))
            trajectory.append(row)

    return RolloutResult(
        success=env.is_success(state) and not aborted,
        partial=env.is_partial(state),
        query_count=queries,
        executed_ticks=t,
        aborted=aborted,
        label=env.label_of(state),
        trajectory=trajectory,
    )


def expected_query_count(total_ticks: int, exec_len: int) -> int:
    return math.ceil(total_ticks / exec_len)

"""Scripted-expert demonstration collection into the episode format."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..data.episode import Episode, Stream, StreamSpec, make_episode, write_episode
from ..seeding import derive_seed
from .envs import make_env
from .expert import make_expert
from .observe import (
    ACTION_RATE_HZ,
    AUDIO_STREAM,
    IMAGE_STREAM,
    PROPRIO_STREAM,
    TACTILE_STREAM,
    ObservationRig,
)
from .sensor_models import SyntheticSensorModel

DEFAULT_EPISODE_TICKS = {"pickplace": 110, "insertion": 80, "reorient": 60}


def run_expert_episode(
    env, expert, rig: ObservationRig, seed: int, ticks: int, label: str | None
):
    """Roll the expert for a fixed tick count, recording all streams."""
    dt = env.dt
    state = env.reset(seed, label)
    images, proprios, actions = [], [], []
    tactile_t, tactile_v = [], []
    audio_chunks = []

    # t=0 samples (pre-step) so alignment has history at the first tick
    if not rig.is_audio:
        tactile_t.append(0.0)
        tactile_v.append(rig._last_reading.copy())
    else:
        audio_chunks.append(np.zeros(1, dtype=np.float32))

    for k in range(ticks):
        fields = rig.fields(state)
        images.append((fields["images"][IMAGE_STREAM] * 255).astype(np.uint8))
        proprios.append(fields["proprio"])
        a = expert.action(state)
        actions.append(np.asarray(a, dtype=np.float32))
        state, rec = env.step(state, a)
        readings = rig.advance(rec.contact)
        if rig.is_audio:
            audio_chunks.append(readings[0])
        else:
            for j, r in enumerate(readings):
                tactile_t.append(k * dt + (j + 1) * rig.sub_dt)
                tactile_v.append(r)

    return state, {
        "images": np.stack(images),
        "proprios": np.stack(proprios),
        "actions": np.stack(actions),
        "tactile_t": np.asarray(tactile_t),
        "tactile_v": np.stack(tactile_v) if tactile_v else None,
        "audio": np.concatenate(audio_chunks) if audio_chunks else None,
    }


def episode_from_rollout(ep_id: str, env, model: SyntheticSensorModel, rec: dict) -> Episode:
    dt = env.dt
    ticks = len(rec["actions"])
    tick_ts = np.arange(ticks, dtype=np.float64) * dt
    streams = [
        Stream(
            StreamSpec("actions", "action", ACTION_RATE_HZ, (env.action_dim,)),
            tick_ts,
            rec["actions"].reshape(ticks, env.action_dim),
        ),
        Stream(
            StreamSpec(PROPRIO_STREAM, "proprio", ACTION_RATE_HZ, (env.proprio_dim,)),
            tick_ts,
            rec["proprios"].astype(np.float32),
        ),
        Stream(
            StreamSpec(
                IMAGE_STREAM, "image", ACTION_RATE_HZ, rec["images"].shape[1:], dtype="uint8"
            ),
            tick_ts,
            rec["images"],
        ),
    ]
    if rec["tactile_v"] is not None:
        streams.append(
            Stream(
                StreamSpec(TACTILE_STREAM, "tactile", model.rate_hz, model.channel_shape),
                rec["tactile_t"],
                rec["tactile_v"].astype(np.float32),
            )
        )
    if rec["audio"] is not None:
        wave = rec["audio"].reshape(-1, 1)
        ts = np.arange(len(wave), dtype=np.float64) / 44100.0
        streams.append(
            Stream(StreamSpec(AUDIO_STREAM, "audio", 44100.0, (1,)), ts, wave)
        )
    return make_episode(ep_id, streams)


def collect_demos(
    env_name: str,
    n_episodes: int,
    out_dir,
    seed: int = 0,
    sensor_model: SyntheticSensorModel | None = None,
    episode_ticks: int | None = None,
    require_success: bool = True,
) -> list[Path]:
    """Write expert demonstrations, alternating latent conditions evenly."""
    env = make_env(env_name)
    model = sensor_model or SyntheticSensorModel(kind="force_3axis", noise_std=0.05)
    ticks = episode_ticks or DEFAULT_EPISODE_TICKS[env_name]
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    labels = env.condition_labels
    paths = []
    for i in range(n_episodes):
        label = labels[i % len(labels)]
        ep_seed = derive_seed(seed, i)
        expert = make_expert(env, seed=ep_seed)
        rig = ObservationRig(env, model, seed=ep_seed)
        final, rec = run_expert_episode(env, expert, rig, ep_seed, ticks, label)
        if require_success and not env.is_success(final):
            raise RuntimeError(
                f"expert failed on episode {i} (seed {ep_seed}, label {label})"
            )
        ep = episode_from_rollout(f"{env_name}_{i:04d}_{label}", env, model, rec)
        paths.append(write_episode(ep, out_dir / ep.id))
    return paths

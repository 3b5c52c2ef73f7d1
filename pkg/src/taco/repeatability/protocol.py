"""Press-release repeatability protocol simulation.

A session is a fixed number of episodes, each a constant-force press followed
by a release, sampled at a fixed rate. One sensor simulation persists across
the whole session so drift accumulates between episodes; an optional
episode-indexed gain ramp reproduces the break-in transient some viscoelastic
sensors show early in a session.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..rollout.sensor_models import ContactForces, SensorSim, SyntheticSensorModel
from ..seeding import derive_rng

SAMPLE_RATE_HZ = 100.0
AUDIO_SAMPLE_RATE_HZ = 1000.0


@dataclass(frozen=True)
class ProtocolSpec:
    """Episode count and press/release durations (seconds)."""

    n_episodes: int = 60
    press_s: float = 30.0
    release_s: float = 30.0

    def __post_init__(self):
        if self.n_episodes < 1 or self.press_s <= 0 or self.release_s < 0:
            raise ValueError("invalid protocol durations")

    @classmethod
    def default(cls) -> "ProtocolSpec":
        return cls(60, 30.0, 30.0)

    @classmethod
    def acoustic(cls) -> "ProtocolSpec":
        # dynamic-contact sensors only respond to transients: short episodes
        return cls(60, 3.0, 3.0)

    @classmethod
    def named(cls, name: str) -> "ProtocolSpec":
        if name == "default":
            return cls.default()
        if name == "acoustic":
            return cls.acoustic()
        raise KeyError(f"unknown protocol '{name}' (default|acoustic)")


@dataclass
class ReadingSeries:
    """One episode of raw readings at a fixed sample rate."""

    times: np.ndarray  # seconds from episode start
    values: np.ndarray  # (n, *channel_shape)
    press_s: float

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValueError("times and values must align")


@dataclass(frozen=True)
class TrainPhase:
    """Episode-indexed gain ramp: gain_e = 1 - depth * exp(-e / episodes)."""

    depth: float = 0.0
    episodes: float = 8.0

    def gain(self, episode_index: int) -> float:
        if self.depth == 0.0:
            return 1.0
        return 1.0 - self.depth * float(np.exp(-episode_index / self.episodes))


def simulate_protocol(
    model: SyntheticSensorModel,
    spec: ProtocolSpec,
    rng: np.random.Generator | None = None,
    press_force: float = 5.0,
    train_phase: TrainPhase = TrainPhase(),
) -> list[ReadingSeries]:
    """Run the whole session; returns one ReadingSeries per episode."""
    rng = rng if rng is not None else derive_rng(0)
    rate = AUDIO_SAMPLE_RATE_HZ if model.kind == "audio_vibration" else SAMPLE_RATE_HZ
    dt = 1.0 / rate
    sim = SensorSim(model, rng=rng)
    episodes = []
    for e in range(spec.n_episodes):
        n_press = int(round(spec.press_s * rate))
        n_release = int(round(spec.release_s * rate))
        times = np.arange(1, n_press + n_release + 1) * dt
        values = []
        gain_scale = train_phase.gain(e)
        for k in range(n_press + n_release):
            pressing = k < n_press
            contact = ContactForces(
                normal=press_force if pressing else 0.0,
                contact=pressing,
                contact_onset=pressing and k == 0,
                slipping=False,
            )
            if model.kind == "audio_vibration":
                chunk = sim.step(contact, dt)
                values.append([float(np.sqrt((chunk**2).mean()))])  # per-window RMS
            else:
                values.append(sim.step(contact, dt, gain_scale=gain_scale))
        episodes.append(
            ReadingSeries(times=times, values=np.asarray(values), press_s=spec.press_s)
        )
    return episodes

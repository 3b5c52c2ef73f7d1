"""Observation synthesis shared by demo collection and closed-loop rollout.

One rig per episode owns the synthetic sensor state. Env dynamics advance at
the action rate; the sensor integrates its lag at its own (higher) rate
inside each tick, so recorded streams are genuinely multi-rate and rollout
observations are drawn from exactly the distribution the demos were.
"""

from __future__ import annotations

import numpy as np

from ..data.alignment import AUDIO_WINDOW_SAMPLES
from ..seeding import derive_rng
from .sensor_models import ContactForces, SensorSim, SyntheticSensorModel

IMAGE_STREAM = "image"
PROPRIO_STREAM = "proprio"
TACTILE_STREAM = "tactile"
AUDIO_STREAM = "mic"
ACTION_RATE_HZ = 10.0


class ObservationRig:
    """Renders, proprioception, and lagged tactile readings for one episode."""

    def __init__(self, env, sensor_model: SyntheticSensorModel, seed: int):
        self.env = env
        self.model = sensor_model
        self.sim = SensorSim(sensor_model, rng=derive_rng(seed, 11))
        self.is_audio = sensor_model.kind == "audio_vibration"
        if self.is_audio:
            self.n_sub = 1
            self.sub_dt = env.dt
        else:
            per_tick = sensor_model.rate_hz * env.dt
            if abs(per_tick - round(per_tick)) > 1e-9 or per_tick < 1:
                raise ValueError(
                    f"sensor rate {sensor_model.rate_hz} Hz must be an integer "
                    f"multiple of the action rate {1 / env.dt} Hz"
                )
            self.n_sub = int(round(per_tick))
            self.sub_dt = env.dt / self.n_sub
        self._audio_buffer = np.zeros(AUDIO_WINDOW_SAMPLES, dtype=np.float32)
        self._last_reading = np.zeros(sensor_model.channel_shape, dtype=np.float32)
        self._boot()

    def _boot(self):
        # one pre-episode reading so every stream has a sample at t=0
        if self.is_audio:
            self._push_audio(np.zeros(1, dtype=np.float32))
        else:
            self._last_reading = self.sim.step(ContactForces(), self.sub_dt)

    def _push_audio(self, chunk: np.ndarray):
        n = len(chunk)
        if n >= AUDIO_WINDOW_SAMPLES:
            self._audio_buffer = chunk[-AUDIO_WINDOW_SAMPLES:].copy()
        else:
            self._audio_buffer = np.concatenate([self._audio_buffer[n:], chunk])

    def advance(self, contact: ContactForces) -> list[np.ndarray]:
        """Integrate the sensor across one env tick; returns intra-tick readings."""
        if self.is_audio:
            chunk = self.sim.step(contact, self.sub_dt)
            self._push_audio(chunk)
            return [chunk]
        readings = [self.sim.step(contact, self.sub_dt) for _ in range(self.n_sub)]
        self._last_reading = readings[-1]
        return readings

    def fields(self, state) -> dict:
        """Denormalized observation fields for the current state."""
        out = {
            "images": {
                IMAGE_STREAM: self.env.render(state).astype(np.float32) / 255.0
            },
            "proprio": self.env.proprio(state),
            "tactile": {},
            "audio": {},
        }
        if self.is_audio:
            out["audio"][AUDIO_STREAM] = self._audio_buffer.copy()
        else:
            out["tactile"][TACTILE_STREAM] = self._last_reading.copy()
        return out

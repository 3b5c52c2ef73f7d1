"""Synthetic tactile sensor dynamics.

Readings follow a first-order lag toward gain x force, with additive Gaussian
noise, linear drift over session time, and an optional hysteresis offset that
appears after release. Channel layout depends on the sensor kind: a single
scalar, a taxel grid excited as a pressure blob, a small set of 3-axis force
units, or a 44.1 kHz vibration channel that emits bursts on contact and slip
events instead of tracking static force.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SENSOR_KINDS = ("scalar_force", "taxel_array", "force_3axis", "audio_vibration")
AUDIO_SIM_RATE = 44100.0


@dataclass(frozen=True)
class ContactForces:
    """Ground-truth interaction state handed to sensor synthesis."""

    normal: float = 0.0
    tangential: float = 0.0
    slipping: bool = False
    contact: bool = False
    contact_onset: bool = False


@dataclass(frozen=True)
class SyntheticSensorModel:
    kind: str = "force_3axis"
    gain: float = 1.0
    noise_std: float = 0.0
    drift_rate: float = 0.0
    hysteresis: float = 0.0
    time_constant: float = 0.05
    taxel_shape: tuple[int, int] = (12, 32)
    n_units: int = 5

    def __post_init__(self):
        if self.kind not in SENSOR_KINDS:
            raise ValueError(f"unknown sensor kind '{self.kind}'")
        if self.noise_std < 0:
            raise ValueError("noise_std must be nonnegative")
        if self.time_constant <= 0:
            raise ValueError("time_constant must be positive")

    @property
    def channel_shape(self) -> tuple[int, ...]:
        if self.kind == "scalar_force":
            return (1,)
        if self.kind == "taxel_array":
            return self.taxel_shape
        if self.kind == "force_3axis":
            return (self.n_units, 3)
        return (1,)  # audio: one sample per reading

    @property
    def rate_hz(self) -> float:
        return AUDIO_SIM_RATE if self.kind == "audio_vibration" else 20.0


def _taxel_blob(shape: tuple[int, int]) -> np.ndarray:
    rows, cols = shape
    y = np.linspace(-1, 1, rows)[:, None]
    x = np.linspace(-1, 1, cols)[None, :]
    return np.exp(-(x**2 + y**2) / 0.35).astype(np.float64)


@dataclass
class SensorSim:
    """Stateful reading generator for one synthetic sensor."""

    model: SyntheticSensorModel
    rng: np.random.Generator = field(default_factory=lambda: np.random.default_rng(0))
    level_normal: float = 0.0
    level_tangential: float = 0.0
    peak: float = 0.0
    released: bool = False
    session_time: float = 0.0
    _blob: np.ndarray | None = None

    def reset(self):
        self.level_normal = 0.0
        self.level_tangential = 0.0
        self.peak = 0.0
        self.released = False
        self.session_time = 0.0

    def _advance_lag(self, contact: ContactForces, dt: float, gain: float):
        m = self.model
        target_n = gain * contact.normal
        target_t = gain * contact.tangential
        if contact.normal > 1e-9:
            self.peak = max(self.peak, target_n)
            self.released = False
        elif self.peak > 0:
            self.released = True
        if self.released:
            target_n += m.hysteresis * self.peak
        alpha = 1.0 - np.exp(-dt / m.time_constant)
        self.level_normal += alpha * (target_n - self.level_normal)
        self.level_tangential += alpha * (target_t - self.level_tangential)

    def step(self, contact: ContactForces, dt: float, gain_scale: float = 1.0) -> np.ndarray:
        """Advance by dt and return the new reading (model.channel_shape)."""
        m = self.model
        if dt <= 0:
            raise ValueError("dt must be positive")
        if m.kind == "audio_vibration":
            return self._audio_step(contact, dt)
        self._advance_lag(contact, dt, m.gain * gain_scale)
        self.session_time += dt
        drift = m.drift_rate * self.session_time

        if m.kind == "scalar_force":
            base = np.array([self.level_normal])
        elif m.kind == "taxel_array":
            if self._blob is None:
                self._blob = _taxel_blob(m.taxel_shape)
            base = self._blob * self.level_normal
        else:  # force_3axis: per-unit (tangential_x, tangential_y, normal)
            unit_gain = 1.0 + 0.02 * np.arange(m.n_units)
            base = np.stack(
                [
                    np.zeros(m.n_units),
                    unit_gain * self.level_tangential,
                    unit_gain * self.level_normal,
                ],
                axis=1,
            )
        reading = base + drift
        if m.noise_std > 0:
            reading = reading + self.rng.normal(0.0, m.noise_std, size=base.shape)
        return reading.astype(np.float32)

    def _audio_step(self, contact: ContactForces, dt: float) -> np.ndarray:
        """Waveform chunk for the dt window (44.1 kHz)."""
        n = max(1, int(round(dt * AUDIO_SIM_RATE)))
        t = (self.session_time + np.arange(n) / AUDIO_SIM_RATE).astype(np.float64)
        wave = 0.002 * self.rng.normal(size=n)  # sensor noise floor
        if contact.contact_onset:
            # damped tone burst on impact
            tau = np.arange(n) / AUDIO_SIM_RATE
            wave += 0.8 * np.sin(2 * np.pi * 1500.0 * tau) * np.exp(-tau / 0.01)
        if contact.slipping:
            wave += 0.25 * self.rng.normal(size=n)
        self.session_time += n / AUDIO_SIM_RATE
        return wave.astype(np.float32)


def synth_tactile(
    contact: ContactForces,
    model: SyntheticSensorModel,
    dt: float,
    sim: SensorSim | None = None,
) -> tuple[np.ndarray, SensorSim]:
    """One reading step; pass the returned sim back in to continue a series."""
    if sim is None:
        sim = SensorSim(model)
    return sim.step(contact, dt), sim

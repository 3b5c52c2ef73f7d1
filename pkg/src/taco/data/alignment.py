"""Nearest-past alignment of multi-rate streams onto action ticks.

Every stream is sampled with a zero-order hold: at tick time tau, a field
carries the latest sample whose timestamp is <= tau. Interpolation is never
used, matching what a controller could actually have seen at that instant.
Acoustic streams are aligned as a trailing window instead, zero-padded at the
start of the episode.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .episode import AUDIO_RATE_HZ, Episode, Stream

AUDIO_WINDOW_SECONDS = 0.5
AUDIO_WINDOW_SAMPLES = int(round(AUDIO_WINDOW_SECONDS * AUDIO_RATE_HZ))  # 22050


class AlignmentError(ValueError):
    """A stream has no sample at or before the first action tick."""


@dataclass
class Observation:
    """One policy-rate input bundle.

    All fields are timestamped at or before tick ``t`` (nearest past). Images
    are float32 in [0, 1], channels last. ``audio_window`` is present only for
    episodes that carry an acoustic stream.
    """

    t: int
    tick_time: float
    images: dict[str, np.ndarray] = field(default_factory=dict)
    proprio: np.ndarray | None = None
    tactile: dict[str, np.ndarray] = field(default_factory=dict)
    audio_window: np.ndarray | None = None


def _as_image(sample: np.ndarray) -> np.ndarray:
    if sample.dtype == np.uint8:
        return sample.astype(np.float32) / 255.0
    return sample.astype(np.float32)


def nearest_past_indices(sample_times: np.ndarray, tick_times: np.ndarray) -> np.ndarray:
    """Index of the latest sample with time <= each tick time.

    Raises AlignmentError when some tick precedes every sample.
    """
    idx = np.searchsorted(sample_times, tick_times, side="right") - 1
    if np.any(idx < 0):
        raise AlignmentError("stream has no sample at or before the first tick")
    return idx


def audio_window_at(stream: Stream, tick_time: float) -> np.ndarray:
    """Trailing 22050-sample window ending at tick_time, zero-padded at start."""
    start = float(stream.timestamps[0])
    samples = stream.data.reshape(-1)
    # last sample index with timestamp <= tick_time
    end = int(np.floor((tick_time - start) * AUDIO_RATE_HZ + 1e-9)) + 1
    end = max(0, min(end, len(samples)))
    lo = max(0, end - AUDIO_WINDOW_SAMPLES)
    window = np.zeros(AUDIO_WINDOW_SAMPLES, dtype=np.float32)
    if end > lo:
        window[AUDIO_WINDOW_SAMPLES - (end - lo):] = samples[lo:end]
    return window


def tick_times_of(ep: Episode) -> np.ndarray:
    return ep.streams["actions"].timestamps


def align_observations(ep: Episode, rate_hz: float | None = None) -> list[Observation]:
    """One Observation per action tick, zero-order-held from each stream.

    ``rate_hz`` declares the expected tick rate and is checked against the
    actions stream's declared rate; pass None to accept the episode's own
    rate.
    """
    actions = ep.streams["actions"]
    if rate_hz is not None:
        declared = float(actions.spec.rate_hz)
        if abs(declared - rate_hz) > 1e-6 * max(declared, rate_hz):
            raise AlignmentError(
                f"requested tick rate {rate_hz} Hz but actions stream is "
                f"declared at {declared} Hz"
            )
    ticks = tick_times_of(ep)

    held: dict[str, np.ndarray] = {}
    for st in ep.streams.values():
        if st.modality in ("action", "audio"):
            continue
        held[st.name] = nearest_past_indices(st.timestamps, ticks)

    audio_streams = ep.streams_by_modality("audio")
    if audio_streams:
        if float(audio_streams[0].timestamps[0]) > float(ticks[0]) + 1e-12:
            raise AlignmentError("stream has no sample at or before the first tick")

    out = []
    for t, tau in enumerate(ticks):
        obs = Observation(t=t, tick_time=float(tau))
        for st in ep.streams.values():
            if st.modality == "image":
                obs.images[st.name] = _as_image(st.data[held[st.name][t]])
            elif st.modality == "proprio":
                obs.proprio = st.data[held[st.name][t]].astype(np.float32)
            elif st.modality == "tactile":
                obs.tactile[st.name] = st.data[held[st.name][t]].astype(np.float32)
        if audio_streams:
            obs.audio_window = audio_window_at(audio_streams[0], float(tau))
        out.append(obs)
    return out

"""Repeatability metrics from press-release reading series.

Multi-channel readings are reduced to their per-reading maximum. All episodes
share one min-max normalization computed over the whole session, so cross-
episode drift stays visible while every curve lands in [0, 1]. The response
time of an episode is the first instant after press onset at which its
normalized reading reaches 90% of that episode's own maximum; episodes that
never get there are excluded and counted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .protocol import ProtocolSpec, ReadingSeries

RESPONSE_FRACTION = 0.9


@dataclass
class RepeatabilityReport:
    sensor_name: str
    n_episodes: int
    response_time_mean_s: float
    response_time_std_s: float
    episode_std: float
    n_excluded: int
    curve_times: np.ndarray
    mean_curve: np.ndarray
    std_curve: np.ndarray
    resting_values: np.ndarray  # normalized first reading per episode
    drift_slope: float  # resting-value trend per episode

    def __post_init__(self):
        if self.response_time_mean_s < 0:
            raise ValueError("response time must be nonnegative")
        for arr in (self.mean_curve, self.resting_values):
            if arr.size and (arr.min() < -1e-9 or arr.max() > 1 + 1e-9):
                raise ValueError("normalized values must lie in [0, 1]")

    def summary_row(self) -> dict:
        return {
            "sensor": self.sensor_name,
            "response_time_mean": self.response_time_mean_s,
            "response_time_std": self.response_time_std_s,
            "std": self.episode_std,
            "n_excluded": self.n_excluded,
        }


def reduce_channels(values: np.ndarray) -> np.ndarray:
    """Max over channels per reading; identity for single-channel sensors."""
    flat = values.reshape(len(values), -1)
    return flat.max(axis=1)


def analyze_repeatability(
    episodes: list[ReadingSeries],
    spec: ProtocolSpec,
    sensor_name: str = "sensor",
) -> RepeatabilityReport:
    if len(episodes) < 2:
        raise ValueError("repeatability analysis needs at least 2 episodes")
    for ep in episodes:
        if ep.times[-1] + 1e-9 < spec.press_s:
            raise ValueError("an episode is shorter than the press phase")

    reduced = [reduce_channels(ep.values).astype(np.float64) for ep in episodes]
    lo = min(r.min() for r in reduced)
    hi = max(r.max() for r in reduced)
    span = hi - lo
    if span <= 0:
        normed = [np.zeros_like(r) for r in reduced]
    else:
        normed = [(r - lo) / span for r in reduced]

    response_times = []
    n_excluded = 0
    for ep, series in zip(episodes, normed):
        threshold = RESPONSE_FRACTION * series.max()
        idx = np.flatnonzero(series >= threshold)
        if idx.size == 0 or series.max() <= 0:
            n_excluded += 1
            continue
        response_times.append(float(ep.times[idx[0]]))

    # matched-time pairing: episodes share press-onset-relative grids; trim
    # to the shortest series so every timestamp has a reading in each episode
    n_common = min(len(s) for s in normed)
    matrix = np.stack([s[:n_common] for s in normed])
    times = episodes[0].times[:n_common]
    std_curve = matrix.std(axis=0)
    mean_curve = matrix.mean(axis=0)

    resting = matrix[:, 0]
    e_idx = np.arange(len(episodes), dtype=np.float64)
    drift_slope = float(np.polyfit(e_idx, resting, 1)[0]) if len(episodes) > 1 else 0.0

    rt = np.asarray(response_times)
    return RepeatabilityReport(
        sensor_name=sensor_name,
        n_episodes=len(episodes),
        response_time_mean_s=float(rt.mean()) if rt.size else 0.0,
        response_time_std_s=float(rt.std()) if rt.size else 0.0,
        episode_std=float(std_curve.mean()),
        n_excluded=n_excluded,
        curve_times=times,
        mean_curve=mean_curve,
        std_curve=std_curve,
        resting_values=resting,
        drift_slope=drift_slope,
    )


def episode_to_series(episode, press_s: float) -> ReadingSeries:
    """Adapt a recorded episode with a single tactile stream to a series."""
    tactile = [s for s in episode.streams.values() if s.modality in ("tactile", "audio")]
    if len(tactile) != 1:
        raise ValueError("repeatability episodes need exactly one tactile stream")
    st = tactile[0]
    times = st.timestamps - st.timestamps[0]
    return ReadingSeries(
        times=np.asarray(times, dtype=np.float64),
        values=st.data.astype(np.float64),
        press_s=press_s,
    )

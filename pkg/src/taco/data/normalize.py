"""Per-key Gaussian normalization statistics.

Stats are computed once from the training episodes and frozen; every input
(image channels, proprioception, tactile arrays, audio samples, actions) is
z-scored against them. Standard deviations are floored so constant channels
never divide by zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

STD_FLOOR = 1e-6


@dataclass
class NormStats:
    """Per-key mean/std arrays. Image keys hold per-channel values."""

    mean: dict[str, np.ndarray] = field(default_factory=dict)
    std: dict[str, np.ndarray] = field(default_factory=dict)

    def keys(self):
        return self.mean.keys()

    def __contains__(self, key: str) -> bool:
        return key in self.mean

    def to_dict(self) -> dict:
        return {
            k: {"mean": self.mean[k].tolist(), "std": self.std[k].tolist()}
            for k in self.mean
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NormStats":
        stats = cls()
        for k, v in d.items():
            stats.mean[k] = np.asarray(v["mean"], dtype=np.float64)
            stats.std[k] = np.asarray(v["std"], dtype=np.float64)
        return stats


def _samples_for_stats(stream) -> np.ndarray:
    """Stream data in the normalization domain, flattened to (n, stat_dim)."""
    data = stream.data
    if stream.modality == "image":
        x = data.astype(np.float64)
        if data.dtype == np.uint8:
            x /= 255.0
        return x.reshape(-1, x.shape[-1])  # pool over time and space, per channel
    if stream.modality == "audio":
        return data.astype(np.float64).reshape(-1, 1)
    return data.astype(np.float64).reshape(len(data), -1)


def _stat_shape(stream) -> tuple[int, ...]:
    if stream.modality == "image":
        return (stream.data.shape[-1],)
    if stream.modality == "audio":
        return (1,)
    return tuple(stream.spec.shape)


def compute_norm_stats(episodes) -> NormStats:
    """Population mean/std per stream key over all samples of all episodes.

    Image stats pool over time and space (one value per channel); every other
    modality gets per-element statistics. Raises on an empty input or on
    episodes whose stream keys disagree.
    """
    episodes = list(episodes)
    if not episodes:
        raise ValueError("compute_norm_stats needs at least one episode")

    keys = set(episodes[0].streams)
    for ep in episodes[1:]:
        if set(ep.streams) != keys:
            missing = keys.symmetric_difference(ep.streams)
            raise ValueError(f"episodes disagree on stream keys: {sorted(missing)}")

    acc: dict[str, list] = {}
    shapes: dict[str, tuple[int, ...]] = {}
    for ep in episodes:
        for name, stream in ep.streams.items():
            flat = _samples_for_stats(stream)
            if name not in acc:
                acc[name] = [0, np.zeros(flat.shape[1]), np.zeros(flat.shape[1])]
                shapes[name] = _stat_shape(stream)
            n, s, sq = acc[name]
            acc[name] = [n + flat.shape[0], s + flat.sum(0), sq + (flat**2).sum(0)]

    stats = NormStats()
    for name, (n, s, sq) in acc.items():
        mean = s / n
        var = np.maximum(sq / n - mean**2, 0.0)
        std = np.maximum(np.sqrt(var), STD_FLOOR)
        stats.mean[name] = mean.reshape(shapes[name])
        stats.std[name] = std.reshape(shapes[name])
    return stats


def apply_normalization(
    x: np.ndarray, stats: NormStats, key: str, direction: str = "forward"
) -> np.ndarray:
    """z-score (forward) or de-z-score (inverse) against the stats for ``key``.

    Stats broadcast against trailing axes, so per-channel image stats apply to
    (..., H, W, C) arrays and per-element stats to (..., *shape) arrays.
    """
    if key not in stats:
        raise KeyError(f"no normalization stats for key '{key}'")
    if direction not in ("forward", "inverse"):
        raise ValueError(f"direction must be forward|inverse, got '{direction}'")
    x = np.asarray(x)
    mean = stats.mean[key].astype(x.dtype if x.dtype.kind == "f" else np.float64)
    std = stats.std[key].astype(mean.dtype)
    if direction == "forward":
        return (x - mean) / std
    return x * std + mean

"""Episode collections to training batches.

Alignment indices are precomputed once per episode; raw payloads stay in
their storage dtype until a sample is actually drawn, so image-heavy datasets
do not balloon in memory. Each drawn sample is augmented, normalized, and
masked with an RNG derived from (run seed, step, slot), making batches
reproducible regardless of worker layout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from ..data.alignment import (
    AUDIO_WINDOW_SAMPLES,
    audio_window_at,
    nearest_past_indices,
)
from ..data.chunks import chunk_targets
from ..data.episode import Episode, Stream
from ..data.normalize import NormStats, apply_normalization
from ..encoders.config import EncoderConfig
from ..encoders.melspec import N_FRAMES, N_MELS, audio_to_melspec
from ..encoders.pca import PCABasis, fit_pca
from ..policy.model import VISION_ONLY, VISUOTACTILE, ObservationSpec
from .augment import AugmentConfig, augment_image, mask_proprio

MEL_STATS_SUFFIX = ".mel"
MEL_STATS_STRIDE = 4


def infer_obs_spec(
    ep: Episode,
    hidden_dim: int = 512,
    tactile_variants: dict[str, str] | None = None,
    mlp_hidden: tuple[int, ...] = (256, 256),
) -> ObservationSpec:
    """Derive the model-facing observation layout from an episode's manifest.

    Tactile encoder variants default by shape (scalar -> linear lift, array
    -> MLP, 3-D image -> conv) and can be overridden per stream.
    """
    cameras = []
    proprio_dim = None
    tactile: dict[str, EncoderConfig] = {}
    overrides = tactile_variants or {}
    for st in ep.manifest.streams:
        if st.modality == "image":
            cameras.append(st.name)
        elif st.modality == "proprio":
            if proprio_dim is not None:
                raise ValueError("expected exactly one proprio stream")
            proprio_dim = st.sample_size
        elif st.modality == "tactile":
            if st.name in overrides:
                variant = overrides[st.name]
            elif st.sample_size == 1:
                variant = "scalar_linear"
            elif len(st.shape) == 3:
                variant = "tactile_image_cnn"
            else:
                variant = "array_mlp"
            tactile[st.name] = EncoderConfig(
                variant, tuple(st.shape), hidden_sizes=mlp_hidden, output_dim=hidden_dim
            )
        elif st.modality == "audio":
            tactile[st.name] = EncoderConfig(
                overrides.get(st.name, "melspec_mlp"),
                (N_MELS, N_FRAMES),
                hidden_sizes=mlp_hidden,
                output_dim=hidden_dim,
            )
    if proprio_dim is None:
        raise ValueError("episode has no proprio stream")
    return ObservationSpec(
        camera_names=tuple(sorted(cameras)), proprio_dim=proprio_dim, tactile=tactile
    )


def add_melspec_stats(
    stats: NormStats, episodes: list[Episode], stride: int = MEL_STATS_STRIDE
) -> NormStats:
    """Extend stats with scalar log-mel statistics per audio stream.

    Mel features live on a log scale unrelated to the raw waveform, so they
    get their own pooled mean/std under the key ``<stream>.mel``, estimated
    over every ``stride``-th tick of the training episodes.
    """
    for name in {
        s.name for ep in episodes for s in ep.manifest.streams if s.modality == "audio"
    }:
        key = name + MEL_STATS_SUFFIX
        n, acc, acc_sq = 0, 0.0, 0.0
        for ep in episodes:
            audio = ep.streams[name]
            ticks = ep.streams["actions"].timestamps[::stride]
            for tau in ticks:
                vals = audio_to_melspec(audio_window_at(audio, float(tau))).values
                n += vals.size
                acc += float(vals.sum())
                acc_sq += float((vals.astype(np.float64) ** 2).sum())
        mean = acc / n
        std = max(np.sqrt(max(acc_sq / n - mean**2, 0.0)), 1e-6)
        stats.mean[key] = np.array([mean])
        stats.std[key] = np.array([std])
    return stats


def fit_pca_bases(
    episodes: list[Episode], obs_spec: ObservationSpec, k: int = 64
) -> dict[str, PCABasis]:
    """Fit a frozen PCA basis per tactile stream that uses a PCA encoder."""
    bases = {}
    for name, cfg in obs_spec.tactile.items():
        if cfg.variant not in ("pca", "pca_mlp"):
            continue
        samples = np.concatenate(
            [ep.streams[name].data.reshape(len(ep.streams[name]), -1) for ep in episodes]
        )
        k_eff = min(k, samples.shape[0] - 1, samples.shape[1])
        bases[name] = fit_pca(samples, k_eff)
    return bases


@dataclass
class _EpisodeCache:
    ep: Episode
    tick_times: np.ndarray
    held: dict[str, np.ndarray]
    norm_actions: np.ndarray
    audio: Stream | None


class ChunkDataset:
    """Indexable (episode, tick) pairs with on-demand sample assembly."""

    def __init__(
        self,
        episodes: list[Episode],
        stats: NormStats,
        obs_spec: ObservationSpec,
        sensor_mode: str = VISUOTACTILE,
        chunk_len: int = 64,
    ):
        if not episodes:
            raise ValueError("dataset needs at least one episode")
        self.stats = stats
        self.obs_spec = obs_spec
        self.sensor_mode = sensor_mode
        self.chunk_len = chunk_len
        self.action_dim = episodes[0].action_dim
        self._caches = [self._build_cache(ep) for ep in episodes]
        self._offsets = np.cumsum([0] + [c.ep.length_T for c in self._caches])

    def _build_cache(self, ep: Episode) -> _EpisodeCache:
        ticks = ep.streams["actions"].timestamps
        held = {}
        audio = None
        for st in ep.streams.values():
            if st.modality == "audio":
                audio = st
            elif st.modality != "action":
                held[st.name] = nearest_past_indices(st.timestamps, ticks)
        acts = ep.streams["actions"].data.reshape(ep.length_T, -1)
        norm_actions = apply_normalization(acts, self.stats, "actions").astype(np.float32)
        return _EpisodeCache(ep, ticks, held, norm_actions, audio)

    def __len__(self) -> int:
        return int(self._offsets[-1])

    @property
    def n_episodes(self) -> int:
        return len(self._caches)

    def locate(self, index: int) -> tuple[int, int]:
        ep_idx = int(np.searchsorted(self._offsets, index, side="right") - 1)
        return ep_idx, int(index - self._offsets[ep_idx])

    # -- sample assembly ---------------------------------------------------

    def raw_fields(self, ep_idx: int, t: int) -> dict:
        """Denormalized observation fields at one tick."""
        cache = self._caches[ep_idx]
        fields: dict = {"images": {}, "tactile": {}, "audio": {}}
        for st in cache.ep.streams.values():
            if st.modality == "image":
                sample = st.data[cache.held[st.name][t]]
                if sample.dtype == np.uint8:
                    sample = sample.astype(np.float32) / 255.0
                fields["images"][st.name] = sample
            elif st.modality == "proprio":
                fields["proprio"] = st.data[cache.held[st.name][t]].astype(np.float32)
            elif st.modality == "tactile":
                fields["tactile"][st.name] = st.data[cache.held[st.name][t]].astype(np.float32)
        if cache.audio is not None:
            fields["audio"][cache.audio.name] = audio_window_at(
                cache.audio, float(cache.tick_times[t])
            )
        return fields

    def transform(
        self,
        fields: dict,
        train: bool,
        aug: AugmentConfig | None = None,
        mask_prob: float = 0.0,
        rng: np.random.Generator | None = None,
    ) -> dict:
        """Augment (train only), normalize, and mask one raw sample."""
        out: dict = {"images": {}, "tactile": {}}
        for name, img in fields["images"].items():
            if train and aug is not None and not aug.identity:
                img = augment_image(img, aug, rng)
            img = apply_normalization(img, self.stats, name).astype(np.float32)
            out["images"][name] = np.ascontiguousarray(img.transpose(2, 0, 1))

        proprio = apply_normalization(fields["proprio"], self.stats, "proprio")
        proprio = proprio.astype(np.float32)
        if train and mask_prob > 0.0:
            proprio = mask_proprio(proprio, mask_prob, rng)
        out["proprio"] = proprio

        if self.sensor_mode == VISUOTACTILE:
            for name, arr in fields["tactile"].items():
                out["tactile"][name] = apply_normalization(arr, self.stats, name).astype(
                    np.float32
                )
            for name, window in fields["audio"].items():
                mel = audio_to_melspec(window).values
                key = name + MEL_STATS_SUFFIX
                out["tactile"][name] = apply_normalization(mel, self.stats, key).astype(
                    np.float32
                )
        return out

    def sample(
        self,
        index: int,
        train: bool = True,
        aug: AugmentConfig | None = None,
        mask_prob: float = 0.0,
        rng: np.random.Generator | None = None,
    ) -> dict:
        ep_idx, t = self.locate(index)
        cache = self._caches[ep_idx]
        item = self.transform(self.raw_fields(ep_idx, t), train, aug, mask_prob, rng)
        chunk = chunk_targets(cache.norm_actions, t, self.chunk_len)
        item["actions"] = chunk.actions
        item["pad_mask"] = chunk.pad_mask
        return item


def collate(samples: list[dict]) -> dict:
    """Stack per-sample dicts into a torch batch."""
    batch: dict = {
        "images": {}, "tactile": {},
        "proprio": torch.from_numpy(np.stack([s["proprio"] for s in samples])),
        "actions": torch.from_numpy(np.stack([s["actions"] for s in samples])),
        "pad_mask": torch.from_numpy(np.stack([s["pad_mask"] for s in samples])),
    }
    for name in samples[0]["images"]:
        batch["images"][name] = torch.from_numpy(np.stack([s["images"][name] for s in samples]))
    for name in samples[0]["tactile"]:
        batch["tactile"][name] = torch.from_numpy(np.stack([s["tactile"][name] for s in samples]))
    return batch


def observation_to_batch(
    dataset_like: ChunkDataset | None,
    fields: dict,
    stats: NormStats,
    obs_spec: ObservationSpec,
    sensor_mode: str,
) -> dict:
    """Single denormalized observation -> inference batch (B=1, no aug)."""
    helper = ChunkDataset.__new__(ChunkDataset)
    helper.stats = stats
    helper.obs_spec = obs_spec
    helper.sensor_mode = sensor_mode
    item = ChunkDataset.transform(helper, fields, train=False)
    sample = dict(item)
    sample["actions"] = np.zeros((1, 1), dtype=np.float32)
    sample["pad_mask"] = np.zeros(1, dtype=bool)
    batch = collate([sample])
    del batch["actions"], batch["pad_mask"]
    return batch

"""Offline checkpoint evaluation on held-out episodes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from ..data.episode import Episode
from ..data.normalize import apply_normalization
from .checkpoint import LoadedPolicy, load_checkpoint
from .pipeline import ChunkDataset, collate


@dataclass
class OfflineMetrics:
    """Mean absolute action error in denormalized units."""

    l1_mean: float
    l1_per_position: np.ndarray  # (chunk_len,)
    n_chunks: int

    def to_dict(self) -> dict:
        return {
            "l1_mean": self.l1_mean,
            "l1_per_position": self.l1_per_position.tolist(),
            "n_chunks": self.n_chunks,
        }


def evaluate_offline(
    checkpoint, episodes: list[Episode], stride: int = 1, batch_size: int = 16
) -> OfflineMetrics:
    """Chunk-prediction L1 against ground truth, reported per chunk position.

    Predictions run with the latent at zero and no augmentation; errors are
    measured after denormalizing, so units match the recorded actions.
    """
    loaded = checkpoint if isinstance(checkpoint, LoadedPolicy) else load_checkpoint(checkpoint)
    if not episodes:
        raise ValueError("evaluate_offline needs at least one episode")
    if episodes[0].action_dim != loaded.policy_config.action_dim:
        raise ValueError(
            f"checkpoint predicts {loaded.policy_config.action_dim}-dim actions but "
            f"dataset actions are {episodes[0].action_dim}-dim"
        )

    cfg = loaded.policy_config
    dataset = ChunkDataset(
        episodes, loaded.stats, loaded.obs_spec, loaded.sensor_mode, cfg.chunk_len
    )
    indices = list(range(0, len(dataset), stride))

    h = cfg.chunk_len
    err_sum = np.zeros(h)
    real_count = np.zeros(h)
    for start in range(0, len(indices), batch_size):
        chunk_idx = indices[start : start + batch_size]
        samples = [dataset.sample(i, train=False) for i in chunk_idx]
        batch = collate(samples)
        pred = loaded.model.predict(batch).numpy()
        pred = apply_normalization(pred, loaded.stats, "actions", "inverse")
        target = apply_normalization(
            batch["actions"].numpy(), loaded.stats, "actions", "inverse"
        )
        real = ~batch["pad_mask"].numpy()  # (B, H)
        err = np.abs(pred - target).sum(axis=2)  # sum over action dims
        err_sum += (err * real).sum(axis=0)
        real_count += real.sum(axis=0)

    per_position = err_sum / np.maximum(real_count, 1)
    total_mean = float(err_sum.sum() / real_count.sum())
    return OfflineMetrics(
        l1_mean=total_mean, l1_per_position=per_position, n_chunks=len(indices)
    )

"""Behavior-cloning training loop.

One logical parameter-update stream: batches are drawn, transformed with
per-sample derived RNGs, and stepped with AdamW under the configured KL
weight. Runs are fully reproducible from (seed, config, data); the metrics
log is append-only JSONL whose deterministic fields are bit-identical across
reruns (wall time is recorded but excluded from comparisons).
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import torch

from ..encoders.nets import ConvEncoderConfig
from ..policy.config import PolicyConfig
from ..policy.act import NonFiniteError
from ..policy.loss import compute_loss
from ..policy.model import SENSOR_MODES, VisuotactilePolicy
from ..seeding import derive_rng, derive_seed
from .augment import AugmentConfig
from .checkpoint import save_checkpoint
from .pipeline import ChunkDataset, collate, fit_pca_bases

DETERMINISTIC_METRIC_FIELDS = ("step", "recon_l1", "kl", "total")


class TrainingDivergedError(RuntimeError):
    """Loss became non-finite; the last good checkpoint is kept on disk."""


@dataclass(frozen=True)
class TrainConfig:
    """Optimization recipe. The full-scale default keeps lr 1e-5; toy runs
    override it along with the step budget."""

    lr: float = 1e-5
    weight_decay: float = 1e-4
    batch_size: int = 8
    steps: int = 50_000
    mask_prob: float = 0.2
    aug: AugmentConfig = field(default_factory=AugmentConfig)
    seed: int = 0
    ckpt_every: int = 1000
    log_every: int = 1
    overfit_single_batch: bool = False

    def __post_init__(self):
        if self.lr <= 0:
            raise ValueError("lr must be positive")
        if not 0.0 <= self.mask_prob <= 1.0:
            raise ValueError("mask_prob must be in [0, 1]")
        if self.batch_size < 1 or self.steps < 1:
            raise ValueError("batch_size and steps must be positive")


@dataclass
class TrainingRunArtifacts:
    run_dir: Path
    metrics_path: Path
    final_checkpoint: Path
    best_checkpoint: Path
    checkpoints: list[Path]
    metrics: list[dict]
    initial_recon: float
    final_recon: float


def _log_line(f, record: dict):
    f.write(json.dumps(record) + "\n")
    f.flush()


def train(
    cfg: TrainConfig,
    dataset: ChunkDataset,
    policy_cfg: PolicyConfig,
    sensor_mode: str,
    out_dir,
    camera_conv: ConvEncoderConfig | None = None,
) -> TrainingRunArtifacts:
    """Train one policy on one dataset split and write run artifacts.

    ``dataset`` must already carry the frozen normalization statistics
    computed from this same training split.
    """
    if sensor_mode not in SENSOR_MODES:
        raise ValueError(f"sensor_mode must be one of {SENSOR_MODES}")
    out_dir = Path(out_dir)
    ckpt_dir = out_dir / "checkpoints"
    ckpt_dir.mkdir(parents=True, exist_ok=True)
    camera_conv = camera_conv or ConvEncoderConfig()

    torch.manual_seed(derive_seed(cfg.seed, 0))
    sampler_rng = derive_rng(cfg.seed, 1)
    latent_gen = torch.Generator().manual_seed(derive_seed(cfg.seed, 2))

    pca_bases = fit_pca_bases(
        [c.ep for c in dataset._caches], dataset.obs_spec, k=64
    )
    model = VisuotactilePolicy(
        policy_cfg,
        dataset.obs_spec,
        sensor_mode=sensor_mode,
        camera_conv=camera_conv,
        pca_bases=pca_bases,
    )
    model.train()
    optim = torch.optim.AdamW(model.parameters(), lr=cfg.lr, weight_decay=cfg.weight_decay)

    snapshot = {
        "train_config": asdict(cfg),
        "policy_config": asdict(policy_cfg),
        "camera_conv": asdict(camera_conv),
        "sensor_mode": sensor_mode,
        "n_episodes": dataset.n_episodes,
        "n_samples": len(dataset),
    }
    with open(out_dir / "config_snapshot.json", "w", encoding="utf-8") as f:
        json.dump(snapshot, f, indent=2, default=str)

    def draw_batch(step: int) -> dict:
        idx = sampler_rng.integers(0, len(dataset), size=cfg.batch_size)
        samples = [
            dataset.sample(
                int(i),
                train=True,
                aug=cfg.aug,
                mask_prob=cfg.mask_prob,
                rng=derive_rng(cfg.seed, 3, step, slot),
            )
            for slot, i in enumerate(idx)
        ]
        return collate(samples)

    fixed_batch = draw_batch(0) if cfg.overfit_single_batch else None

    metrics_path = out_dir / "metrics.jsonl"
    metrics: list[dict] = []
    checkpoints: list[Path] = []
    best = math.inf
    best_path = ckpt_dir / "best.pt"
    final_path = ckpt_dir / "final.pt"
    initial_recon = None
    t0 = time.monotonic()

    def write_ckpt(path: Path, step: int) -> Path:
        return save_checkpoint(
            path, model, dataset.stats, camera_conv, pca_bases, step, asdict(cfg)
        )

    with open(metrics_path, "w", encoding="utf-8") as log:
        for step in range(cfg.steps):
            batch = fixed_batch if fixed_batch is not None else draw_batch(step)
            try:
                pred, post = model.forward_train(batch, latent_gen)
                loss = compute_loss(
                    pred, batch["actions"], batch["pad_mask"], post.mu, post.logvar,
                    lambda_kl=policy_cfg.lambda_kl,
                )
                diverged = not torch.isfinite(loss.total)
            except NonFiniteError:
                diverged = True
            if diverged:
                _log_line(log, {"step": step, "event": "abort_nonfinite"})
                raise TrainingDivergedError(
                    f"non-finite loss at step {step}; last good checkpoint kept"
                )
            optim.zero_grad(set_to_none=True)
            loss.total.backward()
            optim.step()

            vals = loss.detached()
            if initial_recon is None:
                initial_recon = vals["recon_l1"]
            if step % cfg.log_every == 0 or step == cfg.steps - 1:
                record = {
                    "step": step,
                    "recon_l1": vals["recon_l1"],
                    "kl": vals["kl"],
                    "total": vals["total"],
                    "walltime": round(time.monotonic() - t0, 3),
                }
                metrics.append(record)
                _log_line(log, record)
            if vals["total"] < best:
                best = vals["total"]
                write_ckpt(best_path, step)
            if cfg.ckpt_every and (step + 1) % cfg.ckpt_every == 0:
                checkpoints.append(write_ckpt(ckpt_dir / f"step_{step + 1:06d}.pt", step))

    write_ckpt(final_path, cfg.steps - 1)
    return TrainingRunArtifacts(
        run_dir=out_dir,
        metrics_path=metrics_path,
        final_checkpoint=final_path,
        best_checkpoint=best_path,
        checkpoints=checkpoints,
        metrics=metrics,
        initial_recon=float(initial_recon),
        final_recon=float(metrics[-1]["recon_l1"]),
    )


def read_metrics(path) -> list[dict]:
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


def deterministic_view(records: list[dict]) -> list[tuple]:
    """Metrics rows reduced to the fields that must match across reruns."""
    return [
        tuple(r[k] for k in DETERMINISTIC_METRIC_FIELDS)
        for r in records
        if "event" not in r
    ]

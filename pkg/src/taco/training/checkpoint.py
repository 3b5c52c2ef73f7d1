"""Self-contained policy checkpoints.

A checkpoint carries the policy config, observation layout, sensor mode,
weights, and normalization statistics, so inference needs nothing from the
training corpus. PCA bases are persisted as sibling ``.npz`` files and
referenced by name.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from pathlib import Path

import torch

from ..data.normalize import NormStats
from ..encoders.config import EncoderConfig
from ..encoders.nets import ConvEncoderConfig
from ..encoders.pca import PCABasis
from ..policy.config import PolicyConfig
from ..policy.model import ObservationSpec, VisuotactilePolicy

CHECKPOINT_VERSION = 1


class CheckpointError(RuntimeError):
    pass


def save_checkpoint(
    path,
    model: VisuotactilePolicy,
    stats: NormStats,
    camera_conv: ConvEncoderConfig,
    pca_bases: dict[str, PCABasis] | None = None,
    step: int | None = None,
    train_config: dict | None = None,
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pca_files = {}
    for name, basis in (pca_bases or {}).items():
        fname = f"{path.stem}.pca.{name}.npz"
        basis.save(path.parent / fname)
        pca_files[name] = fname
    payload = {
        "version": CHECKPOINT_VERSION,
        "policy_config": asdict(model.cfg),
        "camera_conv": asdict(camera_conv),
        "obs_spec": {
            "camera_names": list(model.obs_spec.camera_names),
            "proprio_dim": model.obs_spec.proprio_dim,
            "tactile": {k: asdict(v) for k, v in model.obs_spec.tactile.items()},
        },
        "sensor_mode": model.sensor_mode,
        "state_dict": model.state_dict(),
        "norm_stats": stats.to_dict(),
        "pca_files": pca_files,
        "step": step,
        "train_config": train_config,
    }
    torch.save(payload, path)
    return path


@dataclass
class LoadedPolicy:
    model: VisuotactilePolicy
    stats: NormStats
    policy_config: PolicyConfig
    camera_conv: ConvEncoderConfig
    obs_spec: ObservationSpec
    sensor_mode: str
    pca_bases: dict[str, PCABasis]
    step: int | None
    train_config: dict | None


def load_checkpoint(path) -> LoadedPolicy:
    path = Path(path)
    if not path.is_file():
        raise CheckpointError(f"no checkpoint at {path}")
    payload = torch.load(path, map_location="cpu", weights_only=False)
    if payload.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"unsupported checkpoint version {payload.get('version')!r}"
        )
    cfg = PolicyConfig(**payload["policy_config"])
    conv = ConvEncoderConfig(**{
        k: tuple(v) if isinstance(v, list) else v
        for k, v in payload["camera_conv"].items()
    })
    spec_doc = payload["obs_spec"]
    obs_spec = ObservationSpec(
        camera_names=tuple(spec_doc["camera_names"]),
        proprio_dim=spec_doc["proprio_dim"],
        tactile={
            k: EncoderConfig(**{
                kk: tuple(vv) if isinstance(vv, list) else vv for kk, vv in v.items()
            })
            for k, v in spec_doc["tactile"].items()
        },
    )
    pca_bases = {}
    for name, fname in payload["pca_files"].items():
        fpath = path.parent / fname
        if not fpath.is_file():
            raise CheckpointError(f"missing PCA basis file {fpath}")
        pca_bases[name] = PCABasis.load(fpath)
    model = VisuotactilePolicy(
        cfg,
        obs_spec,
        sensor_mode=payload["sensor_mode"],
        camera_conv=conv,
        pca_bases=pca_bases,
    )
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return LoadedPolicy(
        model=model,
        stats=NormStats.from_dict(payload["norm_stats"]),
        policy_config=cfg,
        camera_conv=conv,
        obs_spec=obs_spec,
        sensor_mode=payload["sensor_mode"],
        pca_bases=pca_bases,
        step=payload.get("step"),
        train_config=payload.get("train_config"),
    )

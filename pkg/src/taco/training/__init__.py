from .augment import AugmentConfig, augment_image, crop_window, mask_proprio
from .checkpoint import (
    CheckpointError,
    LoadedPolicy,
    load_checkpoint,
    save_checkpoint,
)
from .evaluate import OfflineMetrics, evaluate_offline
from .pipeline import (
    ChunkDataset,
    add_melspec_stats,
    collate,
    fit_pca_bases,
    infer_obs_spec,
    observation_to_batch,
)
from .trainer import (
    TrainConfig,
    TrainingDivergedError,
    TrainingRunArtifacts,
    deterministic_view,
    read_metrics,
    train,
)

__all__ = [
    "AugmentConfig",
    "CheckpointError",
    "ChunkDataset",
    "LoadedPolicy",
    "OfflineMetrics",
    "TrainConfig",
    "TrainingDivergedError",
    "TrainingRunArtifacts",
    "add_melspec_stats",
    "augment_image",
    "collate",
    "crop_window",
    "deterministic_view",
    "evaluate_offline",
    "fit_pca_bases",
    "infer_obs_spec",
    "load_checkpoint",
    "mask_proprio",
    "observation_to_batch",
    "read_metrics",
    "save_checkpoint",
    "train",
]

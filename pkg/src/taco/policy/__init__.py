from .act import ActChunkDecoder, ChunkPosterior, PosteriorParams, sample_latent
from .config import PolicyConfig
from .loss import (
    LOGVAR_MAX,
    LOGVAR_MIN,
    LossBreakdown,
    compute_loss,
    kl_to_standard_normal,
    masked_l1,
)
from .model import (
    SENSOR_MODES,
    VISION_ONLY,
    VISUOTACTILE,
    ObservationSpec,
    VisuotactilePolicy,
)
from .tokens import (
    TokenSequence,
    build_tokens,
    flatten_feature_map,
    sine_positions_1d,
    sine_positions_2d,
)

__all__ = [
    "ActChunkDecoder",
    "ChunkPosterior",
    "LOGVAR_MAX",
    "LOGVAR_MIN",
    "LossBreakdown",
    "ObservationSpec",
    "PolicyConfig",
    "PosteriorParams",
    "SENSOR_MODES",
    "TokenSequence",
    "VISION_ONLY",
    "VISUOTACTILE",
    "VisuotactilePolicy",
    "build_tokens",
    "compute_loss",
    "flatten_feature_map",
    "kl_to_standard_normal",
    "masked_l1",
    "sample_latent",
    "sine_positions_1d",
    "sine_positions_2d",
]

from .config import (
    ADMISSIBLE_VARIANTS,
    TOKEN_DIM,
    VARIANTS,
    EncoderConfig,
    EncoderConfigError,
    admissible_variants_for_shape,
    validate_for_sensor,
)
from .melspec import (
    FLAT_DIM,
    N_FRAMES,
    N_MELS,
    WINDOW_SAMPLES,
    MelSpec,
    audio_to_melspec,
    mel_center_frequencies,
    mel_filterbank,
)
from .nets import (
    ArrayMLPEncoder,
    ConvEncoderConfig,
    ConvImageEncoder,
    FeatureToken,
    MelspecMLPEncoder,
    PCAEncoder,
    ProprioEncoder,
    ScalarLinearEncoder,
    build_tactile_encoder,
)
from .pca import (
    DEFAULT_COMPONENTS,
    PCABasis,
    RankDeficientWarning,
    fit_pca,
    pca_coefficients,
    pca_reconstruct,
)

__all__ = [
    "ADMISSIBLE_VARIANTS",
    "ArrayMLPEncoder",
    "ConvEncoderConfig",
    "ConvImageEncoder",
    "DEFAULT_COMPONENTS",
    "EncoderConfig",
    "EncoderConfigError",
    "FLAT_DIM",
    "FeatureToken",
    "MelSpec",
    "MelspecMLPEncoder",
    "N_FRAMES",
    "N_MELS",
    "PCABasis",
    "PCAEncoder",
    "ProprioEncoder",
    "RankDeficientWarning",
    "ScalarLinearEncoder",
    "TOKEN_DIM",
    "VARIANTS",
    "WINDOW_SAMPLES",
    "admissible_variants_for_shape",
    "audio_to_melspec",
    "build_tactile_encoder",
    "fit_pca",
    "mel_center_frequencies",
    "mel_filterbank",
    "pca_coefficients",
    "pca_reconstruct",
    "validate_for_sensor",
]

"""Encoder variants and their admissibility per sensor.

Encoder choice is sensor-specific: scalar sensors get a linear lift, array
sensors an MLP over raw values, image-like sensors a convolutional or PCA
pathway, and the contact microphone an MLP over log-mel features. Mismatched
pairings (e.g. a spectrogram encoder on a resistive array) are configuration
errors, not silent fallbacks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..data.sensors import get_sensor
from .melspec import FLAT_DIM as MELSPEC_FLAT_DIM
from .pca import DEFAULT_COMPONENTS

TOKEN_DIM = 512

VARIANTS = (
    "scalar_linear",
    "array_mlp",
    "tactile_image_cnn",
    "pca",
    "pca_mlp",
    "melspec_mlp",
)

#: encoder variants exercised per sensor in the ablation study
ADMISSIBLE_VARIANTS: dict[str, tuple[str, ...]] = {
    "FSR": ("scalar_linear",),
    "FlexiTac": ("array_mlp", "tactile_image_cnn", "pca", "pca_mlp"),
    "eGain": ("array_mlp",),
    "eFlesh": ("array_mlp",),
    "Daimon": ("tactile_image_cnn", "pca", "pca_mlp"),
    "ContactMic": ("melspec_mlp",),
}


class EncoderConfigError(ValueError):
    pass


@dataclass(frozen=True)
class EncoderConfig:
    variant: str
    input_shape: tuple[int, ...]
    hidden_sizes: tuple[int, ...] = (256, 256)
    output_dim: int = TOKEN_DIM
    pca_k: int = DEFAULT_COMPONENTS

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise EncoderConfigError(f"unknown encoder variant '{self.variant}'")
        if self.output_dim < 1:
            raise EncoderConfigError("output_dim must be positive")
        flat = int(np.prod(self.input_shape))
        if self.variant == "scalar_linear" and flat != 1:
            raise EncoderConfigError(
                "scalar_linear requires a single-channel input, got "
                f"shape {self.input_shape}"
            )
        if self.variant == "melspec_mlp" and flat != MELSPEC_FLAT_DIM:
            raise EncoderConfigError(
                f"melspec_mlp expects a flattened {MELSPEC_FLAT_DIM}-dim "
                f"spectrogram, got shape {self.input_shape}"
            )
        if self.variant == "tactile_image_cnn" and len(self.input_shape) != 3:
            raise EncoderConfigError(
                "tactile_image_cnn expects an (H, W, C) input shape"
            )

    @property
    def flat_dim(self) -> int:
        return int(np.prod(self.input_shape))


def validate_for_sensor(cfg: EncoderConfig, sensor_name: str) -> EncoderConfig:
    """Reject variants never paired with this sensor in the study matrix."""
    get_sensor(sensor_name)
    allowed = ADMISSIBLE_VARIANTS[sensor_name]
    if cfg.variant not in allowed:
        raise EncoderConfigError(
            f"variant '{cfg.variant}' is not admissible for sensor "
            f"'{sensor_name}' (allowed: {allowed})"
        )
    return cfg


def admissible_variants_for_shape(shape: tuple[int, ...]) -> tuple[str, ...]:
    """Shape-based admissibility for sensors outside the named registry."""
    flat = int(np.prod(shape))
    if flat == 1:
        return ("scalar_linear",)
    if len(shape) == 3:
        return ("tactile_image_cnn", "pca", "pca_mlp", "array_mlp")
    return ("array_mlp", "pca", "pca_mlp")

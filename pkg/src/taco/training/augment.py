"""Training-time input perturbations.

Image augmentation applies, in order: random crop to a fixed fraction of the
side length (then resize back), random rotation, and multiplicative color
jitter (brightness, contrast, saturation). It runs on raw [0, 1] images
before normalization, and only on camera streams; metric tactile images are
never geometrically distorted. Proprio masking zeroes the whole normalized
vector with a configured probability so the policy cannot lean on
proprioception alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import cv2
import numpy as np

_LUMA = np.array([0.299, 0.587, 0.114], dtype=np.float32)


@dataclass(frozen=True)
class AugmentConfig:
    crop_keep: float = 0.95
    rot_deg: float = 5.0
    jitter: float = 0.3

    def __post_init__(self):
        if not 0.0 < self.crop_keep <= 1.0:
            raise ValueError("crop_keep must be in (0, 1]")
        if self.rot_deg < 0 or self.jitter < 0:
            raise ValueError("rot_deg and jitter must be nonnegative")

    @property
    def identity(self) -> bool:
        return self.crop_keep == 1.0 and self.rot_deg == 0.0 and self.jitter == 0.0


def crop_window(side: int, crop_keep: float) -> int:
    """Cropped side length for a given original side."""
    return int(crop_keep * side)


def augment_image(rgb: np.ndarray, cfg: AugmentConfig, rng: np.random.Generator) -> np.ndarray:
    """Randomly perturb one (H, W, 3) float image in [0, 1]; shape preserved."""
    h, w = rgb.shape[:2]
    out = rgb

    if cfg.crop_keep < 1.0:
        ch, cw = crop_window(h, cfg.crop_keep), crop_window(w, cfg.crop_keep)
        top = int(rng.integers(0, h - ch + 1))
        left = int(rng.integers(0, w - cw + 1))
        out = cv2.resize(
            out[top : top + ch, left : left + cw], (w, h), interpolation=cv2.INTER_LINEAR
        )

    if cfg.rot_deg > 0.0:
        angle = float(rng.uniform(-cfg.rot_deg, cfg.rot_deg))
        mat = cv2.getRotationMatrix2D(((w - 1) / 2.0, (h - 1) / 2.0), angle, 1.0)
        out = cv2.warpAffine(
            out, mat, (w, h), flags=cv2.INTER_LINEAR, borderMode=cv2.BORDER_REFLECT
        )

    if cfg.jitter > 0.0:
        b, c, s = rng.uniform(1.0 - cfg.jitter, 1.0 + cfg.jitter, size=3)
        out = out * np.float32(b)
        gray = out @ _LUMA
        out = (out - gray.mean()) * np.float32(c) + gray.mean()
        out = gray[..., None] + (out - gray[..., None]) * np.float32(s)
        out = np.clip(out, 0.0, 1.0)

    return np.ascontiguousarray(out, dtype=np.float32)


def mask_proprio(p: np.ndarray, mask_prob: float, rng: np.random.Generator) -> np.ndarray:
    """Zero the whole vector with probability mask_prob, else pass through."""
    if not 0.0 <= mask_prob <= 1.0:
        raise ValueError("mask_prob must be in [0, 1]")
    if mask_prob == 0.0:
        return p
    if mask_prob == 1.0 or rng.uniform() < mask_prob:
        return np.zeros_like(p)
    return p

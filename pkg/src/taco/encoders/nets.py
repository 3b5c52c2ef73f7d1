"""Trainable feature extractors producing fixed-width tokens.

Every encoder maps one observation field to a ``token_dim``-dimensional
vector (512 by default, the transformer hidden size). The convolutional image
encoder additionally exposes its pre-pooling feature map so image-like
tactile streams can be fused with camera features spatially.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch
import torch.nn as nn

from .config import TOKEN_DIM, EncoderConfig
from .pca import PCABasis

TOKEN_SOURCES = ("image", "proprio", "tactile", "latent")


@dataclass
class FeatureToken:
    """A single encoder output tagged with where it came from."""

    vector: torch.Tensor
    source: str

    def __post_init__(self):
        if self.source not in TOKEN_SOURCES:
            raise ValueError(f"unknown token source '{self.source}'")

    def validate(self, expected_dim: int = TOKEN_DIM):
        if self.vector.shape[-1] != expected_dim:
            raise ValueError(
                f"token dim {self.vector.shape[-1]} != expected {expected_dim}"
            )
        return self


def _mlp(in_dim: int, hidden: tuple[int, ...], out_dim: int) -> nn.Sequential:
    layers: list[nn.Module] = []
    prev = in_dim
    for h in hidden:
        layers += [nn.Linear(prev, h), nn.GELU()]
        prev = h
    layers.append(nn.Linear(prev, out_dim))
    return nn.Sequential(*layers)


class ScalarLinearEncoder(nn.Module):
    """Single scalar reading -> token via one linear map."""

    def __init__(self, out_dim: int = TOKEN_DIM):
        super().__init__()
        self.proj = nn.Linear(1, out_dim)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if not torch.isfinite(x).all():
            raise ValueError("scalar tactile input contains non-finite values")
        return self.proj(x.reshape(x.shape[0], 1))


class ArrayMLPEncoder(nn.Module):
    """Flattened taxel/force array -> token via an MLP."""

    def __init__(self, cfg: EncoderConfig):
        super().__init__()
        self.input_shape = tuple(cfg.input_shape)
        self.net = _mlp(cfg.flat_dim, cfg.hidden_sizes, cfg.output_dim)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if tuple(x.shape[1:]) != self.input_shape:
            raise ValueError(
                f"expected input shape {self.input_shape}, got {tuple(x.shape[1:])}"
            )
        return self.net(x.reshape(x.shape[0], -1))


class ProprioEncoder(nn.Module):
    """Proprioception vector -> token via one linear map."""

    def __init__(self, in_dim: int, out_dim: int = TOKEN_DIM):
        super().__init__()
        self.in_dim = in_dim
        self.proj = nn.Linear(in_dim, out_dim)

    def forward(self, p: torch.Tensor) -> torch.Tensor:
        if p.shape[-1] != self.in_dim:
            raise ValueError(
                f"proprio dim {p.shape[-1]} does not match trained dim {self.in_dim}"
            )
        return self.proj(p)


class MelspecMLPEncoder(nn.Module):
    """Log-mel spectrogram (128 x 87) -> token via an MLP on the flat vector."""

    def __init__(self, cfg: EncoderConfig):
        super().__init__()
        self.flat_dim = cfg.flat_dim
        self.net = _mlp(cfg.flat_dim, cfg.hidden_sizes, cfg.output_dim)

    def forward(self, spec: torch.Tensor) -> torch.Tensor:
        flat = spec.reshape(spec.shape[0], -1)
        if flat.shape[1] != self.flat_dim:
            raise ValueError(f"spectrogram flattens to {flat.shape[1]}, expected {self.flat_dim}")
        return self.net(flat)


class PCAEncoder(nn.Module):
    """Projection coefficients -> token, linearly or through an MLP.

    The basis is frozen (registered as buffers); only the head trains.
    """

    def __init__(self, basis: PCABasis, cfg: EncoderConfig, use_mlp: bool):
        super().__init__()
        self.register_buffer("mean", torch.from_numpy(basis.mean).float())
        self.register_buffer("components", torch.from_numpy(basis.components).float())
        k = basis.k
        self.head = _mlp(k, cfg.hidden_sizes, cfg.output_dim) if use_mlp else nn.Linear(k, cfg.output_dim)

    def coefficients(self, x: torch.Tensor) -> torch.Tensor:
        flat = x.reshape(x.shape[0], -1)
        if flat.shape[1] != self.mean.shape[0]:
            raise ValueError(
                f"input flattens to {flat.shape[1]}, basis expects {self.mean.shape[0]}"
            )
        return (flat - self.mean) @ self.components.T

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.head(self.coefficients(x))


class BasicBlock(nn.Module):
    """Two 3x3 convs with an identity (or 1x1-projected) skip."""

    def __init__(self, in_ch: int, out_ch: int, stride: int, norm: str):
        super().__init__()
        self.conv1 = nn.Conv2d(in_ch, out_ch, 3, stride, 1, bias=False)
        self.n1 = _norm2d(norm, out_ch)
        self.conv2 = nn.Conv2d(out_ch, out_ch, 3, 1, 1, bias=False)
        self.n2 = _norm2d(norm, out_ch)
        self.act = nn.GELU()
        if stride != 1 or in_ch != out_ch:
            self.skip = nn.Sequential(
                nn.Conv2d(in_ch, out_ch, 1, stride, bias=False), _norm2d(norm, out_ch)
            )
        else:
            self.skip = nn.Identity()

    def forward(self, x):
        y = self.act(self.n1(self.conv1(x)))
        y = self.n2(self.conv2(y))
        return self.act(y + self.skip(x))


def _norm2d(kind: str, ch: int) -> nn.Module:
    if kind == "batch":
        return nn.BatchNorm2d(ch)
    if kind == "group":
        return nn.GroupNorm(min(8, ch), ch)
    raise ValueError(f"unknown norm '{kind}'")


@dataclass(frozen=True)
class ConvEncoderConfig:
    """Residual backbone layout. The default is the standard 18-layer
    configuration; smaller presets keep the same output contract."""

    stage_blocks: tuple[int, ...] = (2, 2, 2, 2)
    stage_channels: tuple[int, ...] = (64, 128, 256, 512)
    stem_channels: int = 64
    stem_stride: int = 2
    stem_pool: bool = True
    norm: str = "batch"
    in_channels: int = 3

    @classmethod
    def small(cls, in_channels: int = 3) -> "ConvEncoderConfig":
        return cls(
            stage_blocks=(1, 1, 1),
            stage_channels=(16, 32, 64),
            stem_channels=16,
            stem_stride=2,
            stem_pool=True,
            norm="group",
            in_channels=in_channels,
        )

    @classmethod
    def tiny(cls, in_channels: int = 3) -> "ConvEncoderConfig":
        return cls(
            stage_blocks=(1,),
            stage_channels=(8,),
            stem_channels=8,
            stem_stride=1,
            stem_pool=False,
            norm="group",
            in_channels=in_channels,
        )


class ConvImageEncoder(nn.Module):
    """Residual conv backbone -> (spatial feature map, pooled token).

    The feature map is projected to ``token_dim`` channels with a 1x1 conv so
    each spatial position can serve directly as a transformer token; the
    pooled token is the spatial mean of that map.
    """

    def __init__(self, cfg: ConvEncoderConfig = ConvEncoderConfig(), token_dim: int = TOKEN_DIM):
        super().__init__()
        self.cfg = cfg
        stem = [
            nn.Conv2d(cfg.in_channels, cfg.stem_channels, 7, cfg.stem_stride, 3, bias=False),
            _norm2d(cfg.norm, cfg.stem_channels),
            nn.GELU(),
        ]
        if cfg.stem_pool:
            stem.append(nn.MaxPool2d(3, 2, 1))
        self.stem = nn.Sequential(*stem)

        blocks = []
        in_ch = cfg.stem_channels
        for i, (n, ch) in enumerate(zip(cfg.stage_blocks, cfg.stage_channels)):
            for j in range(n):
                stride = 2 if (j == 0 and i > 0) else 1
                blocks.append(BasicBlock(in_ch, ch, stride, cfg.norm))
                in_ch = ch
        self.stages = nn.Sequential(*blocks)
        self.project = nn.Conv2d(in_ch, token_dim, 1)
        self.token_dim = token_dim

    def forward(self, x: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        if x.shape[1] != self.cfg.in_channels:
            raise ValueError(
                f"expected {self.cfg.in_channels} input channels, got {x.shape[1]}"
            )
        fmap = self.project(self.stages(self.stem(x)))  # (B, token_dim, h, w)
        token = fmap.mean(dim=(2, 3))
        return fmap, token


def build_tactile_encoder(cfg: EncoderConfig, basis: PCABasis | None = None) -> nn.Module:
    """Instantiate the encoder for one tactile stream from its config."""
    if cfg.variant == "scalar_linear":
        return ScalarLinearEncoder(cfg.output_dim)
    if cfg.variant == "array_mlp":
        return ArrayMLPEncoder(cfg)
    if cfg.variant == "melspec_mlp":
        return MelspecMLPEncoder(cfg)
    if cfg.variant in ("pca", "pca_mlp"):
        if basis is None:
            raise ValueError(f"variant '{cfg.variant}' requires a fitted PCABasis")
        return PCAEncoder(basis, cfg, use_mlp=cfg.variant == "pca_mlp")
    if cfg.variant == "tactile_image_cnn":
        h, w, c = cfg.input_shape
        conv_cfg = ConvEncoderConfig.small(in_channels=c)
        return ConvImageEncoder(conv_cfg, token_dim=cfg.output_dim)
    raise ValueError(f"unknown encoder variant '{cfg.variant}'")

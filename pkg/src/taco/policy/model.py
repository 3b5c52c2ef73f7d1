"""Complete visuotactile (or vision-only) policy.

Bundles the observation encoders with the CVAE transformer core. The
vision-only variant is the identical architecture with the tactile encoders
and tokens absent; everything else, including data and training recipe, is
shared.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import torch
import torch.nn as nn

from ..encoders.config import EncoderConfig
from ..encoders.nets import (
    ConvEncoderConfig,
    ConvImageEncoder,
    ProprioEncoder,
    build_tactile_encoder,
)
from ..encoders.pca import PCABasis
from .act import ActChunkDecoder, ChunkPosterior, PosteriorParams, sample_latent
from .config import PolicyConfig
from .tokens import TokenSequence, build_tokens

VISION_ONLY = "vision_only"
VISUOTACTILE = "visuotactile"
SENSOR_MODES = (VISION_ONLY, VISUOTACTILE)


@dataclass(frozen=True)
class ObservationSpec:
    """What one observation contains, as the model sees it."""

    camera_names: tuple[str, ...]
    proprio_dim: int
    tactile: dict[str, EncoderConfig] = field(default_factory=dict)

    def __post_init__(self):
        if not self.camera_names:
            raise ValueError("at least one camera stream is required")
        if self.proprio_dim < 1:
            raise ValueError("proprio_dim must be positive")

    def image_tactile_names(self) -> tuple[str, ...]:
        return tuple(
            sorted(n for n, c in self.tactile.items() if c.variant == "tactile_image_cnn")
        )

    def token_tactile_names(self) -> tuple[str, ...]:
        return tuple(
            sorted(n for n, c in self.tactile.items() if c.variant != "tactile_image_cnn")
        )


class VisuotactilePolicy(nn.Module):
    def __init__(
        self,
        cfg: PolicyConfig,
        obs_spec: ObservationSpec,
        sensor_mode: str = VISUOTACTILE,
        camera_conv: ConvEncoderConfig | None = None,
        pca_bases: dict[str, PCABasis] | None = None,
    ):
        super().__init__()
        if sensor_mode not in SENSOR_MODES:
            raise ValueError(f"sensor_mode must be one of {SENSOR_MODES}")
        self.cfg = cfg
        self.obs_spec = obs_spec
        self.sensor_mode = sensor_mode
        d = cfg.hidden_dim

        self.camera_encoder = ConvImageEncoder(
            camera_conv or ConvEncoderConfig(), token_dim=d
        )
        self.proprio_encoder = ProprioEncoder(obs_spec.proprio_dim, d)
        self.latent_proj = nn.Linear(cfg.latent_dim, d)

        self.tactile_encoders = nn.ModuleDict()
        if sensor_mode == VISUOTACTILE:
            for name, enc_cfg in sorted(obs_spec.tactile.items()):
                if enc_cfg.output_dim != d:
                    raise ValueError(
                        f"tactile encoder '{name}' outputs {enc_cfg.output_dim}, "
                        f"policy hidden dim is {d}"
                    )
                basis = (pca_bases or {}).get(name)
                self.tactile_encoders[name] = build_tactile_encoder(enc_cfg, basis)

        self.slot_embed = nn.ParameterDict(
            {
                "latent": nn.Parameter(torch.zeros(d)),
                "proprio": nn.Parameter(torch.zeros(d)),
                "tactile": nn.Parameter(torch.zeros(d)),
            }
        )
        for p in self.slot_embed.values():
            nn.init.normal_(p, std=0.02)

        self.posterior_net = ChunkPosterior(
            cfg, obs_spec.proprio_dim if cfg.condition_posterior_on_proprio else None
        )
        self.core = ActChunkDecoder(cfg)

    # -- token assembly -------------------------------------------------

    def tokenize(self, batch: dict, z: torch.Tensor) -> TokenSequence:
        image_maps = []
        for name in self.obs_spec.camera_names:
            fmap, _ = self.camera_encoder(batch["images"][name])
            image_maps.append(fmap)

        tactile_tokens: list[torch.Tensor] = []
        tactile_map = None
        if self.sensor_mode == VISUOTACTILE:
            for name in self.obs_spec.token_tactile_names():
                enc = self.tactile_encoders[name]
                tactile_tokens.append(enc(batch["tactile"][name]))
            image_like = self.obs_spec.image_tactile_names()
            if image_like:
                maps = [self.tactile_encoders[n](batch["tactile"][n])[0] for n in image_like]
                tactile_map = maps[0] if len(maps) == 1 else torch.cat(maps, dim=3)

        return build_tokens(
            z_latent=self.latent_proj(z),
            z_prop=self.proprio_encoder(batch["proprio"]),
            tactile_tokens=tuple(tactile_tokens),
            image_maps=tuple(image_maps),
            tactile_map=tactile_map,
            slot_embed=dict(self.slot_embed),
        )

    # -- training and inference ------------------------------------------

    def posterior(self, actions: torch.Tensor, pad_mask: torch.Tensor,
                  proprio: torch.Tensor | None = None) -> PosteriorParams:
        return self.posterior_net(actions, pad_mask, proprio)

    def forward_train(
        self, batch: dict, generator: torch.Generator | None = None
    ) -> tuple[torch.Tensor, PosteriorParams]:
        post = self.posterior(
            batch["actions"],
            batch["pad_mask"],
            batch["proprio"] if self.cfg.condition_posterior_on_proprio else None,
        )
        z = sample_latent(post, "train", generator)
        pred = self.core(self.tokenize(batch, z))
        return pred, post

    @torch.no_grad()
    def predict(self, batch: dict) -> torch.Tensor:
        """Inference-time chunk prediction with the latent fixed at zero."""
        was_training = self.training
        self.eval()
        try:
            b = batch["proprio"].shape[0]
            z = torch.zeros(b, self.cfg.latent_dim, dtype=batch["proprio"].dtype)
            return self.core(self.tokenize(batch, z))
        finally:
            self.train(was_training)

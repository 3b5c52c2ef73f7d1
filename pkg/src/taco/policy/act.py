"""CVAE action-chunking transformer core.

Training: a posterior encoder reads the ground-truth chunk into a latent
Gaussian, a reparameterized sample becomes the latent token, and a
transformer encoder-decoder maps the token sequence to the predicted chunk.
Inference: the latent is zero and the same decoder runs deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
import torch.nn as nn

from .config import PolicyConfig
from .loss import LOGVAR_MAX, LOGVAR_MIN
from .tokens import TokenSequence, sine_positions_1d


class NonFiniteError(ValueError):
    """A forward pass produced or received non-finite values."""


@dataclass
class PosteriorParams:
    """Latent Gaussian (mu, logvar), logvar clamped to a safe range."""

    mu: torch.Tensor
    logvar: torch.Tensor

    def __post_init__(self):
        if self.mu.shape != self.logvar.shape:
            raise ValueError("mu and logvar must have equal shapes")
        if not (torch.isfinite(self.mu).all() and torch.isfinite(self.logvar).all()):
            raise NonFiniteError("posterior parameters must be finite")


class ChunkPosterior(nn.Module):
    """q(z | a): transformer encoder over the action chunk, CLS readout.

    Padded chunk rows are excluded from attention, so their contents cannot
    influence the posterior. Optionally conditions on proprioception via one
    extra token (off by default).
    """

    def __init__(self, cfg: PolicyConfig, proprio_dim: int | None = None):
        super().__init__()
        self.cfg = cfg
        d = cfg.hidden_dim
        self.action_proj = nn.Linear(cfg.action_dim, d)
        self.cls = nn.Parameter(torch.zeros(1, 1, d))
        nn.init.normal_(self.cls, std=0.02)
        self.proprio_proj = None
        if cfg.condition_posterior_on_proprio:
            if proprio_dim is None:
                raise ValueError("proprio conditioning requested but no proprio_dim")
            self.proprio_proj = nn.Linear(proprio_dim, d)
        layer = nn.TransformerEncoderLayer(
            d, cfg.heads, cfg.ffn_dim, cfg.dropout, activation="gelu"
        )
        self.encoder = nn.TransformerEncoder(layer, cfg.posterior_layers, enable_nested_tensor=False)
        self.out = nn.Linear(d, 2 * cfg.latent_dim)

    def forward(
        self,
        actions: torch.Tensor,
        pad_mask: torch.Tensor,
        proprio: torch.Tensor | None = None,
    ) -> PosteriorParams:
        if actions.ndim != 3 or actions.shape[2] != self.cfg.action_dim:
            raise ValueError(
                f"chunk must be (B, H, {self.cfg.action_dim}), got {tuple(actions.shape)}"
            )
        b, h, _ = actions.shape
        seq = [self.cls.expand(1, b, -1), self.action_proj(actions).transpose(0, 1)]
        mask = [torch.zeros(b, 1, dtype=torch.bool, device=actions.device), pad_mask]
        if self.proprio_proj is not None:
            if proprio is None:
                raise ValueError("posterior configured to condition on proprio")
            seq.insert(1, self.proprio_proj(proprio)[None])
            mask.insert(1, torch.zeros(b, 1, dtype=torch.bool, device=actions.device))
        x = torch.cat(seq, dim=0)
        x = x + sine_positions_1d(x.shape[0], x.shape[2], x.dtype, x.device)[:, None, :]
        key_pad = torch.cat(mask, dim=1)
        enc = self.encoder(x, src_key_padding_mask=key_pad)
        mu, logvar = self.out(enc[0]).chunk(2, dim=-1)
        return PosteriorParams(mu=mu, logvar=logvar.clamp(LOGVAR_MIN, LOGVAR_MAX))


def sample_latent(
    post: PosteriorParams,
    mode: str = "train",
    generator: torch.Generator | None = None,
) -> torch.Tensor:
    """Reparameterized draw in training; exactly zero at inference."""
    if mode == "infer":
        return torch.zeros_like(post.mu)
    if mode != "train":
        raise ValueError(f"mode must be train|infer, got '{mode}'")
    eps = torch.empty_like(post.mu).normal_(generator=generator)
    return post.mu + torch.exp(0.5 * post.logvar) * eps


class ActChunkDecoder(nn.Module):
    """Encoder-decoder transformer from a token sequence to an action chunk."""

    def __init__(self, cfg: PolicyConfig):
        super().__init__()
        self.cfg = cfg
        d = cfg.hidden_dim
        enc_layer = nn.TransformerEncoderLayer(
            d, cfg.heads, cfg.ffn_dim, cfg.dropout, activation="gelu"
        )
        self.encoder = nn.TransformerEncoder(enc_layer, cfg.enc_layers, enable_nested_tensor=False)
        dec_layer = nn.TransformerDecoderLayer(
            d, cfg.heads, cfg.ffn_dim, cfg.dropout, activation="gelu"
        )
        self.decoder = nn.TransformerDecoder(dec_layer, cfg.dec_layers)
        self.head = nn.Linear(d, cfg.action_dim)

    def forward(self, seq: TokenSequence) -> torch.Tensor:
        x = seq.embedded
        if not torch.isfinite(x).all():
            raise NonFiniteError("token sequence contains non-finite values")
        memory = self.encoder(x)
        h = self.cfg.chunk_len
        queries = sine_positions_1d(h, x.shape[2], x.dtype, x.device)
        tgt = queries[:, None, :].expand(-1, x.shape[1], -1)
        out = self.decoder(tgt, memory)  # (H, B, D)
        return self.head(out).transpose(0, 1)  # (B, H, A)

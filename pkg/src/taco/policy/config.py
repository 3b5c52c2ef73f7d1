"""Policy hyperparameters."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class PolicyConfig:
    """Transformer policy dimensions and CVAE settings.

    Defaults follow the full-scale recipe (hidden 512, 4 encoder and 7
    decoder layers, 8 heads, 64-step chunks with 32 executed). Reduced
    presets keep the same architecture for desk-scale runs and tests.
    """

    action_dim: int
    hidden_dim: int = 512
    enc_layers: int = 4
    dec_layers: int = 7
    heads: int = 8
    chunk_len: int = 64
    exec_len: int = 32
    latent_dim: int = 32
    lambda_kl: float = 10.0
    ffn_dim: int | None = None  # defaults to 4 * hidden_dim
    dropout: float = 0.1
    posterior_layers: int | None = None  # defaults to enc_layers
    condition_posterior_on_proprio: bool = False

    def __post_init__(self):
        if self.hidden_dim % self.heads != 0:
            raise ValueError("hidden_dim must be divisible by heads")
        if self.exec_len > self.chunk_len:
            raise ValueError("exec_len must not exceed chunk_len")
        if self.action_dim < 1 or self.latent_dim < 1:
            raise ValueError("action_dim and latent_dim must be positive")
        if self.ffn_dim is None:
            object.__setattr__(self, "ffn_dim", 4 * self.hidden_dim)
        if self.posterior_layers is None:
            object.__setattr__(self, "posterior_layers", self.enc_layers)

    @classmethod
    def small(cls, action_dim: int, **overrides) -> "PolicyConfig":
        """Desk-scale preset: same structure, lighter dimensions."""
        kw = dict(
            hidden_dim=128,
            enc_layers=2,
            dec_layers=3,
            heads=4,
            latent_dim=16,
            ffn_dim=256,
            dropout=0.1,
            posterior_layers=1,
        )
        kw.update(overrides)
        return cls(action_dim=action_dim, **kw)

    @classmethod
    def tiny(cls, action_dim: int, **overrides) -> "PolicyConfig":
        """Gradient-check scale: one encoder and one decoder layer."""
        kw = dict(
            hidden_dim=16,
            enc_layers=1,
            dec_layers=1,
            heads=2,
            chunk_len=8,
            exec_len=4,
            latent_dim=4,
            ffn_dim=32,
            dropout=0.0,
            posterior_layers=1,
        )
        kw.update(overrides)
        return cls(action_dim=action_dim, **kw)

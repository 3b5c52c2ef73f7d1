"""Behavior-cloning objective: masked L1 reconstruction plus a KL penalty.

The reconstruction term sums absolute errors over action dimensions and
averages over unpadded chunk steps, so its magnitude does not depend on how
much of a chunk is padding. The KL term is the closed form against a standard
normal prior. The total is always recon + lambda_kl * kl.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch

LOGVAR_MIN, LOGVAR_MAX = -10.0, 10.0


@dataclass
class LossBreakdown:
    total: torch.Tensor
    recon_l1: torch.Tensor
    kl: torch.Tensor

    def detached(self) -> dict[str, float]:
        return {
            "total": float(self.total.detach()),
            "recon_l1": float(self.recon_l1.detach()),
            "kl": float(self.kl.detach()),
        }


def kl_to_standard_normal(mu: torch.Tensor, logvar: torch.Tensor) -> torch.Tensor:
    """KL(N(mu, diag exp(logvar)) || N(0, I)), summed over latent dims."""
    return 0.5 * (logvar.exp() + mu.pow(2) - 1.0 - logvar).sum(dim=-1)


def masked_l1(pred: torch.Tensor, target: torch.Tensor, pad_mask: torch.Tensor) -> torch.Tensor:
    """Per-sample L1: sum over action dims, mean over unpadded steps.

    Shapes: pred/target (B, H, A), pad_mask (B, H) with True marking padding.
    """
    if pred.shape != target.shape:
        raise ValueError(f"pred {tuple(pred.shape)} vs target {tuple(target.shape)}")
    if pad_mask.shape != pred.shape[:2]:
        raise ValueError("pad_mask must be (B, H)")
    n_real = (~pad_mask).sum(dim=1)
    if (n_real == 0).any():
        raise ValueError("a chunk with every row padded has no reconstruction target")
    per_step = (pred - target).abs().sum(dim=2)  # (B, H)
    per_step = per_step.masked_fill(pad_mask, 0.0)
    return per_step.sum(dim=1) / n_real


def compute_loss(
    pred: torch.Tensor,
    target: torch.Tensor,
    pad_mask: torch.Tensor,
    mu: torch.Tensor,
    logvar: torch.Tensor,
    lambda_kl: float = 10.0,
) -> LossBreakdown:
    """Batch-mean objective. Accepts unbatched (H, A) / (H,) / (L,) inputs."""
    if pred.ndim == 2:
        pred, target = pred[None], target[None]
        pad_mask, mu, logvar = pad_mask[None], mu[None], logvar[None]
    recon = masked_l1(pred, target, pad_mask).mean()
    kl = kl_to_standard_normal(mu, logvar).mean()
    return LossBreakdown(total=recon + lambda_kl * kl, recon_l1=recon, kl=kl)

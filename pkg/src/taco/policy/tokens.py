"""Transformer input assembly.

The encoder consumes one sequence per timestep: a latent token, a proprio
token, standalone tactile tokens for low-dimensional sensors, and the
flattened spatial feature map of the camera(s). Image-like tactile features
are not given their own token; their map is concatenated to the camera map
along the width axis before flattening, so tactile and visual content share
the spatial attention pattern.

Latent/proprio/tactile slots carry learned embeddings; spatial tokens and
decoder queries use fixed sinusoidal encodings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import torch


@dataclass
class TokenSequence:
    """Ordered encoder inputs with per-token provenance.

    ``tokens`` and ``pos`` are (S, B, D); ``pos`` holds the positional/slot
    embedding that is added to ``tokens`` at the encoder input. ``sources``
    tags each position with one of latent|proprio|tactile|image.
    """

    tokens: torch.Tensor
    pos: torch.Tensor
    sources: tuple[str, ...]

    def __post_init__(self):
        if self.tokens.ndim != 3 or self.pos.shape != self.tokens.shape:
            raise ValueError("tokens and pos must both be (S, B, D)")
        if len(self.sources) != self.tokens.shape[0]:
            raise ValueError("one source tag per token required")
        if self.sources.count("latent") != 1:
            raise ValueError("sequence must contain exactly one latent token")

    def __len__(self) -> int:
        return self.tokens.shape[0]

    @property
    def embedded(self) -> torch.Tensor:
        return self.tokens + self.pos


def sine_positions_1d(n: int, dim: int, dtype=torch.float32, device=None) -> torch.Tensor:
    """(n, dim) fixed sinusoidal encoding."""
    if dim % 2 != 0:
        raise ValueError("sinusoidal dim must be even")
    pos = torch.arange(n, dtype=dtype, device=device)[:, None]
    i = torch.arange(dim // 2, dtype=dtype, device=device)[None, :]
    angle = pos / torch.pow(torch.tensor(10000.0, dtype=dtype, device=device), 2 * i / dim)
    out = torch.zeros(n, dim, dtype=dtype, device=device)
    out[:, 0::2] = torch.sin(angle)
    out[:, 1::2] = torch.cos(angle)
    return out


def sine_positions_2d(h: int, w: int, dim: int, dtype=torch.float32, device=None) -> torch.Tensor:
    """(h*w, dim) encoding: first half of channels over y, second over x."""
    if dim % 4 != 0:
        raise ValueError("2-D sinusoidal dim must be divisible by 4")
    half = dim // 2
    y = sine_positions_1d(h, half, dtype, device)  # (h, half)
    x = sine_positions_1d(w, half, dtype, device)  # (w, half)
    out = torch.zeros(h, w, dim, dtype=dtype, device=device)
    out[..., :half] = y[:, None, :]
    out[..., half:] = x[None, :, :]
    return out.reshape(h * w, dim)


def flatten_feature_map(fmap: torch.Tensor) -> torch.Tensor:
    """(B, D, h, w) -> (h*w, B, D) row-major over (y, x)."""
    b, d, h, w = fmap.shape
    return fmap.permute(2, 3, 0, 1).reshape(h * w, b, d)


def build_tokens(
    z_latent: torch.Tensor,
    z_prop: torch.Tensor,
    tactile_tokens: tuple[torch.Tensor, ...] = (),
    image_maps: tuple[torch.Tensor, ...] = (),
    tactile_map: torch.Tensor | None = None,
    slot_embed: dict[str, torch.Tensor] | None = None,
) -> TokenSequence:
    """Assemble [latent, proprio, tactile..., spatial...] for one timestep.

    ``tactile_tokens`` carries standalone 512-d tokens (scalar/array/audio
    sensors); ``tactile_map`` carries an image-like tactile feature map that
    is width-concatenated after the camera maps instead of getting its own
    token. Both may be empty (vision-only).
    """
    if z_latent.ndim != 2 or z_prop.ndim != 2:
        raise ValueError("latent and proprio tokens must be (B, D)")
    b, d = z_latent.shape
    dev, dt = z_latent.device, z_latent.dtype

    def slot(name: str) -> torch.Tensor:
        if slot_embed is None or name not in slot_embed:
            return torch.zeros(d, device=dev, dtype=dt)
        return slot_embed[name]

    toks = [z_latent, z_prop]
    pos = [slot("latent").expand(b, d), slot("proprio").expand(b, d)]
    sources = ["latent", "proprio"]
    for tok in tactile_tokens:
        toks.append(tok)
        pos.append(slot("tactile").expand(b, d))
        sources.append("tactile")

    maps = list(image_maps)
    if tactile_map is not None:
        if not maps:
            raise ValueError("an image-like tactile map requires a camera map")
        maps.append(tactile_map)
    if maps:
        heights = {m.shape[2] for m in maps}
        chans = {m.shape[1] for m in maps}
        if len(heights) != 1 or chans != {d}:
            raise ValueError(
                "feature maps must share height and channel count for "
                f"width-wise concatenation, got heights {sorted(heights)} "
                f"and channels {sorted(chans)}"
            )
        merged = torch.cat(maps, dim=3)  # (B, D, h, W_total)
        spatial = flatten_feature_map(merged)
        spos = sine_positions_2d(merged.shape[2], merged.shape[3], d, dt, dev)
        toks.append(spatial)
        pos.append(spos[:, None, :].expand(-1, b, -1))
        sources.extend(["image"] * spatial.shape[0])

    stacked = [t[None] if t.ndim == 2 else t for t in toks]
    posed = [p[None] if p.ndim == 2 else p for p in pos]
    return TokenSequence(
        tokens=torch.cat(stacked, dim=0),
        pos=torch.cat(posed, dim=0),
        sources=tuple(sources),
    )

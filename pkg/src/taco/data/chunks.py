"""Fixed-horizon action chunk extraction with tail padding."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .alignment import Observation, align_observations
from .episode import Episode

DEFAULT_CHUNK_LEN = 64


@dataclass
class ActionChunk:
    """A horizon-H action matrix plus its padding mask.

    Rows past the end of the episode replicate the final real action and are
    flagged True in ``pad_mask``; losses must exclude them.
    """

    actions: np.ndarray  # (H, action_dim)
    pad_mask: np.ndarray  # (H,) bool, True = padded

    def __post_init__(self):
        if self.actions.ndim != 2:
            raise ValueError("chunk actions must be (H, action_dim)")
        if self.pad_mask.shape != (self.actions.shape[0],):
            raise ValueError("pad_mask length must equal chunk length")

    @property
    def horizon(self) -> int:
        return self.actions.shape[0]

    @property
    def n_real(self) -> int:
        return int((~self.pad_mask).sum())


def chunk_targets(action_matrix: np.ndarray, t: int, horizon: int) -> ActionChunk:
    """Slice actions[t : t+H] out of a (T, action_dim) matrix, padding the tail."""
    T = action_matrix.shape[0]
    if not 0 <= t < T:
        raise IndexError(f"tick {t} out of range [0, {T})")
    n_real = min(horizon, T - t)
    actions = np.empty((horizon, action_matrix.shape[1]), dtype=action_matrix.dtype)
    actions[:n_real] = action_matrix[t : t + n_real]
    actions[n_real:] = action_matrix[T - 1]
    pad = np.zeros(horizon, dtype=bool)
    pad[n_real:] = True
    return ActionChunk(actions=actions, pad_mask=pad)


def sample_chunk(
    ep: Episode,
    t: int,
    horizon: int = DEFAULT_CHUNK_LEN,
    observations: list[Observation] | None = None,
) -> tuple[Observation, ActionChunk]:
    """Training pair at tick t: the aligned observation and its target chunk.

    Pass precomputed ``observations`` (from align_observations) to avoid
    realigning the episode on every call.
    """
    if not 0 <= t < ep.length_T:
        raise IndexError(f"tick {t} out of range [0, {ep.length_T})")
    if observations is None:
        observations = align_observations(ep)
    acts = ep.streams["actions"].data.reshape(ep.length_T, -1).astype(np.float32)
    return observations[t], chunk_targets(acts, t, horizon)

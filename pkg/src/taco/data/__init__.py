from .alignment import (
    AUDIO_WINDOW_SAMPLES,
    AlignmentError,
    Observation,
    align_observations,
    audio_window_at,
    nearest_past_indices,
    tick_times_of,
)
from .chunks import DEFAULT_CHUNK_LEN, ActionChunk, chunk_targets, sample_chunk
from .episode import (
    AUDIO_RATE_HZ,
    Episode,
    EpisodeFormatError,
    Stream,
    StreamManifest,
    StreamSpec,
    load_episode,
    make_episode,
    write_episode,
)
from .normalize import STD_FLOOR, NormStats, apply_normalization, compute_norm_stats
from .sensors import ON_DEMAND, SENSORS, SensorSpec, check_channel_shape, get_sensor

__all__ = [
    "AUDIO_RATE_HZ",
    "AUDIO_WINDOW_SAMPLES",
    "ActionChunk",
    "AlignmentError",
    "DEFAULT_CHUNK_LEN",
    "Episode",
    "EpisodeFormatError",
    "NormStats",
    "ON_DEMAND",
    "Observation",
    "SENSORS",
    "STD_FLOOR",
    "SensorSpec",
    "Stream",
    "StreamManifest",
    "StreamSpec",
    "align_observations",
    "apply_normalization",
    "audio_window_at",
    "check_channel_shape",
    "chunk_targets",
    "compute_norm_stats",
    "get_sensor",
    "load_episode",
    "make_episode",
    "nearest_past_indices",
    "sample_chunk",
    "tick_times_of",
    "write_episode",
]

from .analyze import (
    RESPONSE_FRACTION,
    RepeatabilityReport,
    analyze_repeatability,
    episode_to_series,
    reduce_channels,
)
from .protocol import (
    AUDIO_SAMPLE_RATE_HZ,
    SAMPLE_RATE_HZ,
    ProtocolSpec,
    ReadingSeries,
    TrainPhase,
    simulate_protocol,
)
from .report import SUMMARY_COLUMNS, emit_curves

__all__ = [
    "AUDIO_SAMPLE_RATE_HZ",
    "ProtocolSpec",
    "RESPONSE_FRACTION",
    "ReadingSeries",
    "RepeatabilityReport",
    "SAMPLE_RATE_HZ",
    "SUMMARY_COLUMNS",
    "TrainPhase",
    "analyze_repeatability",
    "emit_curves",
    "episode_to_series",
    "reduce_channels",
    "simulate_protocol",
]

"""Vibrotactile audio frontend: 0.5 s windows to log-mel spectrograms.

A 22050-sample window (0.5 s at 44.1 kHz) is analyzed with a centered STFT
(FFT 512, hop 256, periodic Hann), giving 1 + floor(22050/256) = 87 frames.
Magnitudes pass through a 128-band triangular mel filterbank spanning 0 to
22050 Hz, then a log with a small floor. Output shape is always (128, 87),
which flattens to the 11136-dim vector the downstream MLP consumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SAMPLE_RATE = 44100
WINDOW_SECONDS = 0.5
WINDOW_SAMPLES = 22050
N_FFT = 512
HOP = 256
N_MELS = 128
N_FRAMES = 1 + WINDOW_SAMPLES // HOP  # 87
LOG_EPS = 1e-10
FLAT_DIM = N_MELS * N_FRAMES  # 11136


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_center_frequencies(n_mels: int = N_MELS, fmax: float = SAMPLE_RATE / 2) -> np.ndarray:
    """Center frequency (Hz) of each triangular band."""
    edges = np.linspace(hz_to_mel(0.0), hz_to_mel(fmax), n_mels + 2)
    return mel_to_hz(edges[1:-1])


def mel_filterbank(
    n_mels: int = N_MELS, n_fft: int = N_FFT, sr: int = SAMPLE_RATE
) -> np.ndarray:
    """(n_mels, n_fft//2 + 1) triangular weights with unit peak.

    Each weight is the triangle's average over the FFT bin's bandwidth rather
    than a point sample at the bin center: with this many bands some
    triangles are narrower than one bin, and point sampling would alias them
    (a band whose peak falls between bins would be under-weighted or lost).
    """
    edges_hz = mel_to_hz(np.linspace(hz_to_mel(0.0), hz_to_mel(sr / 2), n_mels + 2))
    df = sr / n_fft
    bin_freqs = np.arange(n_fft // 2 + 1) * df
    a = (bin_freqs - df / 2)[None, :]  # bin interval start
    b = (bin_freqs + df / 2)[None, :]
    left = edges_hz[:-2][:, None]
    center = edges_hz[1:-1][:, None]
    right = edges_hz[2:][:, None]

    # integral of the rising edge (f - L)/(C - L) over [a, b] clipped to [L, C]
    lo = np.clip(a, left, center)
    hi = np.clip(b, left, center)
    up = ((hi - left) ** 2 - (lo - left) ** 2) / (2.0 * (center - left))
    # integral of the falling edge (R - f)/(R - C) over [a, b] clipped to [C, R]
    lo = np.clip(a, center, right)
    hi = np.clip(b, center, right)
    down = ((right - lo) ** 2 - (right - hi) ** 2) / (2.0 * (right - center))
    return (up + down) / df


@dataclass
class MelSpec:
    """Log-mel values for one audio window (mel bins x frames)."""

    values: np.ndarray
    window_seconds: float = WINDOW_SECONDS
    sample_rate: int = SAMPLE_RATE

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.shape != (N_MELS, N_FRAMES):
            raise ValueError(
                f"mel values must be ({N_MELS}, {N_FRAMES}), got {self.values.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("mel values must be finite")

    def flatten(self) -> np.ndarray:
        return self.values.reshape(-1)


def _hann_periodic(n: int) -> np.ndarray:
    return 0.5 * (1.0 - np.cos(2.0 * np.pi * np.arange(n) / n))


_WINDOW = _hann_periodic(N_FFT)
_MEL_FB = mel_filterbank()


def stft_magnitude(window: np.ndarray) -> np.ndarray:
    """(n_fft//2+1, N_FRAMES) magnitude spectrogram of one audio window."""
    padded = np.pad(window.astype(np.float64), N_FFT // 2, mode="reflect")
    starts = np.arange(N_FRAMES) * HOP
    frames = np.lib.stride_tricks.sliding_window_view(padded, N_FFT)[starts]
    return np.abs(np.fft.rfft(frames * _WINDOW, axis=1)).T


def audio_to_melspec(window: np.ndarray) -> MelSpec:
    """Log-mel spectrogram of exactly one 22050-sample window."""
    window = np.asarray(window).reshape(-1)
    if window.shape != (WINDOW_SAMPLES,):
        raise ValueError(
            f"audio window must have {WINDOW_SAMPLES} samples, got {window.shape}"
        )
    if not np.all(np.isfinite(window)):
        raise ValueError("audio window contains non-finite samples")
    mel = _MEL_FB @ stft_magnitude(window)
    return MelSpec(values=np.log(mel + LOG_EPS).astype(np.float32))

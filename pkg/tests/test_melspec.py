import numpy as np
import pytest

from taco.encoders import (
    FLAT_DIM,
    N_FRAMES,
    N_MELS,
    WINDOW_SAMPLES,
    audio_to_melspec,
    mel_center_frequencies,
    mel_filterbank,
)
from taco.encoders.melspec import HOP, LOG_EPS, SAMPLE_RATE


def test_shape_contract():
    spec = audio_to_melspec(np.random.default_rng(0).normal(size=WINDOW_SAMPLES))
    assert spec.values.shape == (N_MELS, N_FRAMES) == (128, 87)
    assert spec.flatten().shape == (FLAT_DIM,) == (11136,)
    assert np.all(np.isfinite(spec.values))


def test_frame_count_matches_hop_arithmetic():
    assert N_FRAMES == 1 + WINDOW_SAMPLES // HOP


def test_silence_is_uniform_log_floor():
    spec = audio_to_melspec(np.zeros(WINDOW_SAMPLES, np.float32))
    assert np.all(spec.values == np.float32(np.log(LOG_EPS)))


def test_pure_tone_argmax_at_nearest_center():
    # 1 kHz sine: the hottest mel band is the one whose center frequency is
    # nearest 1 kHz, and it stays hottest in every frame.
    t = np.arange(WINDOW_SAMPLES) / SAMPLE_RATE
    spec = audio_to_melspec(np.sin(2 * np.pi * 1000.0 * t))
    centers = mel_center_frequencies()
    expected = int(np.argmin(np.abs(centers - 1000.0)))
    energy = np.exp(spec.values.astype(np.float64)).sum(axis=1)
    assert int(np.argmax(energy)) == expected
    # interior frames only: edge padding smears the 2 boundary frames
    per_frame = np.argmax(spec.values[:, 2:-2], axis=0)
    assert np.all(per_frame == expected)


def test_tone_sweep_argmax_at_nearest_center():
    # Holds wherever bands are at least bin-width apart (roughly >= 1 kHz
    # for this FFT size); below that a single bin spans several bands.
    t = np.arange(WINDOW_SAMPLES) / SAMPLE_RATE
    centers = mel_center_frequencies()
    for f0 in (1500.0, 2000.0, 3000.0, 5000.0, 8000.0, 12000.0):
        spec = audio_to_melspec(np.sin(2 * np.pi * f0 * t))
        expected = int(np.argmin(np.abs(centers - f0)))
        got = int(np.argmax(np.exp(spec.values.astype(np.float64)).sum(axis=1)))
        assert got == expected


def test_impulse_hop_shift_moves_frames_not_energies():
    # Shifting a silence-padded impulse by exactly one hop shifts frame
    # content by one column; the multiset of interior frame energies is kept.
    x = np.zeros(WINDOW_SAMPLES, np.float32)
    x[WINDOW_SAMPLES // 2] = 1.0
    y = np.zeros(WINDOW_SAMPLES, np.float32)
    y[WINDOW_SAMPLES // 2 + HOP] = 1.0
    ex = np.exp(audio_to_melspec(x).values.astype(np.float64)).sum(axis=0)
    ey = np.exp(audio_to_melspec(y).values.astype(np.float64)).sum(axis=0)
    np.testing.assert_allclose(ex[2:-3], ey[3:-2], rtol=1e-9)


def test_wrong_length_rejected():
    with pytest.raises(ValueError, match="22050"):
        audio_to_melspec(np.zeros(22049))


def test_nonfinite_rejected():
    x = np.zeros(WINDOW_SAMPLES)
    x[5] = np.nan
    with pytest.raises(ValueError, match="non-finite"):
        audio_to_melspec(x)


def test_filterbank_geometry():
    fb = mel_filterbank()
    assert fb.shape == (128, 257)
    assert np.all(fb >= 0)
    # every band keeps some mass despite being narrower than a bin in places
    assert fb.sum(axis=1).min() > 0
    centers = mel_center_frequencies()
    assert np.all(np.diff(centers) > 0)

import json

import numpy as np
import pytest

from taco.data import (
    Episode,
    EpisodeFormatError,
    StreamManifest,
    StreamSpec,
    load_episode,
    make_episode,
    write_episode,
)

from conftest import make_stream, toy_episode


def test_load_well_formed_episode(episode_dir):
    ep = load_episode(episode_dir)
    assert ep.length_T == len(ep.streams["actions"])
    assert set(ep.streams) == {"actions", "proprio", "tactile"}


def test_roundtrip_bit_identical(tmp_path, episode_dir):
    ep = load_episode(episode_dir)
    out = write_episode(ep, tmp_path / "copy")
    ep2 = load_episode(out)
    for name in ep.streams:
        np.testing.assert_array_equal(ep.streams[name].data, ep2.streams[name].data)
        np.testing.assert_array_equal(ep.streams[name].timestamps, ep2.streams[name].timestamps)


def test_audio_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    wave = rng.normal(size=(4410, 1)).astype(np.float32)
    audio = make_stream("audio", "audio", 44100.0, (1,), wave, t0=0.25)
    actions = make_stream("actions", "action", 10.0, (2,), np.ones((3, 2), np.float32), t0=0.25)
    ep = make_episode("aud", [actions, audio])
    ep2 = load_episode(write_episode(ep, tmp_path / "aud"))
    np.testing.assert_array_equal(ep2.streams["audio"].data, wave)
    assert ep2.streams["audio"].timestamps[0] == 0.25


def test_uint8_image_roundtrip(tmp_path):
    rng = np.random.default_rng(1)
    imgs = rng.integers(0, 256, size=(5, 8, 8, 3), dtype=np.uint8)
    image = make_stream("image", "image", 10.0, (8, 8, 3), imgs, dtype="uint8")
    actions = make_stream("actions", "action", 10.0, (2,), np.zeros((5, 2), np.float32))
    ep = make_episode("img", [actions, image])
    ep2 = load_episode(write_episode(ep, tmp_path / "img"))
    np.testing.assert_array_equal(ep2.streams["image"].data, imgs)
    assert ep2.streams["image"].data.dtype == np.uint8


def test_missing_manifest(tmp_path):
    with pytest.raises(EpisodeFormatError, match="manifest"):
        load_episode(tmp_path)


def test_repeated_timestamp_rejected():
    values = np.zeros((4, 2), np.float32)
    ts = np.array([0.0, 0.1, 0.1, 0.3])
    bad = make_stream("actions", "action", 10.0, (2,), values, timestamps=ts)
    with pytest.raises(EpisodeFormatError, match="non-monotone timestamps in actions"):
        make_episode("bad", [bad])


def test_missing_actions_stream():
    proprio = make_stream("proprio", "proprio", 10.0, (2,), np.zeros((4, 2), np.float32))
    with pytest.raises(EpisodeFormatError, match="actions"):
        make_episode("noact", [proprio])


def test_shape_mismatch_on_disk(tmp_path, episode_dir):
    # Declare a (12, 32) taxel grid but store 380 floats per sample.
    ep_dir = tmp_path / "corrupt"
    ep_dir.mkdir()
    n = 6
    manifest = {
        "id": "corrupt",
        "streams": [
            {"name": "actions", "modality": "action", "rate_hz": 10.0,
             "shape": [2], "dtype": "float32", "file": "actions.bin"},
            {"name": "flexitac", "modality": "tactile", "rate_hz": 20.0,
             "shape": [12, 32], "dtype": "float32", "file": "flexitac.bin"},
        ],
    }
    (ep_dir / "manifest.json").write_text(json.dumps(manifest))
    rec = []
    for i in range(n):
        rec.append(np.float64(i / 10.0).tobytes())
        rec.append(np.zeros(2, np.float32).tobytes())
    (ep_dir / "actions.bin").write_bytes(b"".join(rec))
    rec = []
    for i in range(n):
        rec.append(np.float64(i / 20.0).tobytes())
        rec.append(np.zeros(380, np.float32).tobytes())  # should be 384
    (ep_dir / "flexitac.bin").write_bytes(b"".join(rec))

    with pytest.raises(EpisodeFormatError, match="flexitac"):
        load_episode(ep_dir)


def test_missing_stream_file(tmp_path, episode_dir):
    (episode_dir / "tactile.bin").unlink()
    with pytest.raises(EpisodeFormatError, match="tactile"):
        load_episode(episode_dir)


def test_audio_shape_and_rate_enforced():
    with pytest.raises(EpisodeFormatError, match="audio sample shape"):
        StreamSpec(name="audio", modality="audio", rate_hz=44100.0, shape=(2,))
    with pytest.raises(EpisodeFormatError, match="audio rate"):
        StreamSpec(name="audio", modality="audio", rate_hz=22050.0, shape=(1,))


def test_duplicate_stream_names_rejected():
    a = make_stream("actions", "action", 10.0, (2,), np.zeros((3, 2), np.float32))
    with pytest.raises(EpisodeFormatError, match="duplicate"):
        StreamManifest((a.spec, a.spec))

import numpy as np
import pytest

from taco.data import Episode, Stream, StreamSpec, make_episode


def make_stream(
    name,
    modality,
    rate_hz,
    shape,
    values,
    t0=0.0,
    dtype="float32",
    timestamps=None,
):
    spec = StreamSpec(name=name, modality=modality, rate_hz=rate_hz, shape=tuple(shape), dtype=dtype)
    values = np.asarray(values)
    if timestamps is None:
        timestamps = t0 + np.arange(len(values), dtype=np.float64) / rate_hz
    return Stream(spec, np.asarray(timestamps, dtype=np.float64), values)


def toy_episode(T=20, action_dim=3, proprio_dim=4, tactile_shape=(2, 3), rate=10.0, seed=0, ep_id="ep"):
    """Small well-formed episode: actions/proprio at the tick rate, tactile at 2x."""
    rng = np.random.default_rng(seed)
    actions = make_stream(
        "actions", "action", rate, (action_dim,), rng.normal(size=(T, action_dim)).astype(np.float32)
    )
    proprio = make_stream(
        "proprio", "proprio", rate, (proprio_dim,), rng.normal(size=(T, proprio_dim)).astype(np.float32)
    )
    tactile = make_stream(
        "tactile", "tactile", 2 * rate, tactile_shape,
        rng.normal(size=(2 * T, *tactile_shape)).astype(np.float32),
    )
    return make_episode(ep_id, [actions, proprio, tactile])


def toy_visual_episode(
    T=24, img=16, action_dim=3, proprio_dim=4, tactile_shape=(5, 3),
    rate=10.0, seed=0, ep_id="ep", with_audio=False,
):
    """Episode with a camera stream, for pipeline/trainer tests.

    Actions are a smooth function of the tick so a policy can fit them;
    images and tactile correlate with the action phase.
    """
    rng = np.random.default_rng(seed)
    phase = np.linspace(0, 2 * np.pi, T)
    acts = np.stack([np.sin(phase + k) for k in range(action_dim)], axis=1)
    actions = make_stream("actions", "action", rate, (action_dim,), acts.astype(np.float32))
    proprio = make_stream(
        "proprio", "proprio", rate, (proprio_dim,),
        np.stack([np.cos(phase + k) for k in range(proprio_dim)], axis=1).astype(np.float32),
    )
    imgs = np.zeros((T, img, img, 3), dtype=np.uint8)
    for t in range(T):
        col = int((t / max(T - 1, 1)) * (img - 3))
        imgs[t, :, col : col + 3, :] = 255
    image = make_stream("image", "image", rate, (img, img, 3), imgs, dtype="uint8")
    tac = rng.normal(size=(2 * T, *tactile_shape)).astype(np.float32)
    tac += np.sin(np.arange(2 * T))[:, None, None].astype(np.float32)
    tactile = make_stream("tactile", "tactile", 2 * rate, tactile_shape, tac)
    streams = [actions, proprio, image, tactile]
    if with_audio:
        n = int(T / rate * 44100)
        wave = (0.1 * rng.normal(size=(n, 1))).astype(np.float32)
        streams.append(make_stream("mic", "audio", 44100.0, (1,), wave))
    return make_episode(ep_id, streams)


@pytest.fixture
def episode_dir(tmp_path):
    """Write a toy episode to disk and return its directory."""
    from taco.data import write_episode

    ep = toy_episode(seed=3)
    return write_episode(ep, tmp_path / "ep000")

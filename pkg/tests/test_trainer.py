import numpy as np
import pytest
import torch

from taco.data import compute_norm_stats
from taco.encoders import ConvEncoderConfig
from taco.policy import PolicyConfig, VISION_ONLY, VISUOTACTILE
from taco.training import (
    AugmentConfig,
    ChunkDataset,
    TrainConfig,
    TrainingDivergedError,
    deterministic_view,
    evaluate_offline,
    infer_obs_spec,
    load_checkpoint,
    read_metrics,
    train,
)

from conftest import toy_visual_episode


@pytest.fixture(scope="module")
def toy_eps():
    return [toy_visual_episode(T=24, seed=i, ep_id=f"e{i}") for i in range(3)]


def small_setup(eps, chunk_len=8, sensor_mode=VISUOTACTILE):
    stats = compute_norm_stats(eps)
    spec = infer_obs_spec(eps[0], hidden_dim=32, mlp_hidden=(16,))
    ds = ChunkDataset(eps, stats, spec, sensor_mode, chunk_len=chunk_len)
    policy_cfg = PolicyConfig(
        action_dim=3, hidden_dim=32, enc_layers=1, dec_layers=1, heads=2,
        chunk_len=chunk_len, exec_len=chunk_len // 2, latent_dim=4, ffn_dim=64,
        dropout=0.0, posterior_layers=1,
    )
    return ds, policy_cfg


def quick_cfg(**kw):
    base = dict(
        lr=1e-3, batch_size=4, steps=30, mask_prob=0.2,
        aug=AugmentConfig(crop_keep=1.0, rot_deg=0.0, jitter=0.0),
        seed=0, ckpt_every=0, log_every=1,
    )
    base.update(kw)
    return TrainConfig(**base)


def test_loss_decreases_on_fixed_batch(toy_eps, tmp_path):
    ds, policy_cfg = small_setup(toy_eps)
    cfg = quick_cfg(steps=120, overfit_single_batch=True, mask_prob=0.0)
    art = train(cfg, ds, policy_cfg, VISUOTACTILE, tmp_path / "run",
                camera_conv=ConvEncoderConfig.tiny())
    assert art.final_recon < 0.6 * art.initial_recon


def test_metrics_log_deterministic_across_reruns(toy_eps, tmp_path):
    ds, policy_cfg = small_setup(toy_eps)
    views = []
    for name in ("a", "b"):
        art = train(quick_cfg(), ds, policy_cfg, VISUOTACTILE, tmp_path / name,
                    camera_conv=ConvEncoderConfig.tiny())
        views.append(deterministic_view(read_metrics(art.metrics_path)))
    assert views[0] == views[1]
    assert len(views[0]) == 30


def test_seed_changes_trajectory(toy_eps, tmp_path):
    ds, policy_cfg = small_setup(toy_eps)
    a = train(quick_cfg(seed=0), ds, policy_cfg, VISUOTACTILE, tmp_path / "s0",
              camera_conv=ConvEncoderConfig.tiny())
    b = train(quick_cfg(seed=1), ds, policy_cfg, VISUOTACTILE, tmp_path / "s1",
              camera_conv=ConvEncoderConfig.tiny())
    assert deterministic_view(a.metrics) != deterministic_view(b.metrics)


def test_checkpoint_roundtrip_bit_identical(toy_eps, tmp_path):
    ds, policy_cfg = small_setup(toy_eps)
    art = train(quick_cfg(steps=5), ds, policy_cfg, VISUOTACTILE, tmp_path / "run",
                camera_conv=ConvEncoderConfig.tiny())
    loaded = load_checkpoint(art.final_checkpoint)
    again = load_checkpoint(art.final_checkpoint)
    for k, v in loaded.model.state_dict().items():
        torch.testing.assert_close(v, again.model.state_dict()[k], rtol=0, atol=0)
    assert loaded.sensor_mode == VISUOTACTILE
    assert "actions" in loaded.stats.mean


def test_vision_only_run_has_no_tactile_params(toy_eps, tmp_path):
    ds_vo, policy_cfg = small_setup(toy_eps, sensor_mode=VISION_ONLY)
    art = train(quick_cfg(steps=3), ds_vo, policy_cfg, VISION_ONLY, tmp_path / "vo",
                camera_conv=ConvEncoderConfig.tiny())
    loaded = load_checkpoint(art.final_checkpoint)
    assert not any(k.startswith("tactile_encoders.") for k in loaded.model.state_dict())


def test_divergence_aborts_and_keeps_checkpoint(toy_eps, tmp_path):
    ds, policy_cfg = small_setup(toy_eps)
    cfg = quick_cfg(lr=1e30, steps=10)
    with pytest.raises(TrainingDivergedError):
        train(cfg, ds, policy_cfg, VISUOTACTILE, tmp_path / "div",
              camera_conv=ConvEncoderConfig.tiny())
    records = read_metrics(tmp_path / "div" / "metrics.jsonl")
    assert any("event" in r for r in records)
    assert (tmp_path / "div" / "checkpoints" / "best.pt").exists()


def test_evaluate_offline_near_zero_after_overfit(toy_eps, tmp_path):
    ds, policy_cfg = small_setup(toy_eps[:1])
    cfg = quick_cfg(steps=250, overfit_single_batch=False, mask_prob=0.0, batch_size=8)
    art = train(cfg, ds, policy_cfg, VISUOTACTILE, tmp_path / "run",
                camera_conv=ConvEncoderConfig.tiny())
    metrics = evaluate_offline(art.final_checkpoint, toy_eps[:1], stride=3)
    # memorization bound: error well below the action scale (~unit amplitude)
    assert metrics.l1_mean < 1.0
    assert metrics.l1_per_position.shape == (8,)


def test_evaluate_offline_constant_action_oracle(tmp_path):
    # constant-action dataset: L1 equals |pred - c| averaged, via brute force
    eps = [toy_visual_episode(T=16, seed=i, ep_id=f"c{i}") for i in range(2)]
    for ep in eps:
        ep.streams["actions"].data[:] = 0.5
    ds, policy_cfg = small_setup(eps)
    art = train(quick_cfg(steps=3), ds, policy_cfg, VISUOTACTILE, tmp_path / "run",
                camera_conv=ConvEncoderConfig.tiny())
    loaded = load_checkpoint(art.final_checkpoint)
    metrics = evaluate_offline(loaded, eps, stride=1)

    from taco.data import apply_normalization
    from taco.training import collate

    step_errs = []
    for i in range(len(ds)):
        s = ds.sample(i, train=False)
        batch = collate([s])
        pred = loaded.model.predict(batch)[0].numpy()
        pred = apply_normalization(pred, loaded.stats, "actions", "inverse")
        tgt = apply_normalization(s["actions"], loaded.stats, "actions", "inverse")
        real = ~s["pad_mask"]
        step_errs.extend(np.abs(pred - tgt).sum(1)[real].tolist())
    assert metrics.l1_mean == pytest.approx(float(np.mean(step_errs)), rel=1e-5)


def test_action_dim_mismatch_rejected(toy_eps, tmp_path):
    ds, policy_cfg = small_setup(toy_eps)
    art = train(quick_cfg(steps=2), ds, policy_cfg, VISUOTACTILE, tmp_path / "run",
                camera_conv=ConvEncoderConfig.tiny())
    bad = [toy_visual_episode(T=12, action_dim=5, seed=0, ep_id="bad")]
    with pytest.raises(ValueError, match="action"):
        evaluate_offline(art.final_checkpoint, bad)


def test_invalid_train_config():
    with pytest.raises(ValueError):
        TrainConfig(lr=0.0)
    with pytest.raises(ValueError):
        TrainConfig(mask_prob=1.5)
    with pytest.raises(ValueError):
        TrainConfig(steps=0)

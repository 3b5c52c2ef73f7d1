import numpy as np
import pytest

from taco.training import AugmentConfig, augment_image, crop_window, mask_proprio


def _img(h=32, w=32, seed=0):
    return np.random.default_rng(seed).uniform(size=(h, w, 3)).astype(np.float32)


def test_degenerate_config_is_identity():
    cfg = AugmentConfig(crop_keep=1.0, rot_deg=0.0, jitter=0.0)
    assert cfg.identity
    img = _img()
    out = augment_image(img, cfg, np.random.default_rng(0))
    np.testing.assert_array_equal(out, img)


def test_output_shape_preserved_any_seed():
    cfg = AugmentConfig()
    img = _img(48, 36)
    for seed in range(5):
        out = augment_image(img, cfg, np.random.default_rng(seed))
        assert out.shape == img.shape
        assert out.dtype == np.float32


def test_crop_window_arithmetic():
    assert crop_window(224, 0.95) == 212
    assert crop_window(64, 0.95) == 60
    assert crop_window(100, 1.0) == 100


def test_same_rng_same_output():
    cfg = AugmentConfig()
    img = _img()
    a = augment_image(img, cfg, np.random.default_rng(7))
    b = augment_image(img, cfg, np.random.default_rng(7))
    np.testing.assert_array_equal(a, b)


def test_jitter_only_stays_in_unit_range():
    cfg = AugmentConfig(crop_keep=1.0, rot_deg=0.0, jitter=0.3)
    img = _img()
    out = augment_image(img, cfg, np.random.default_rng(3))
    assert out.min() >= 0.0 and out.max() <= 1.0
    assert not np.array_equal(out, img)


def test_invalid_configs_rejected():
    with pytest.raises(ValueError):
        AugmentConfig(crop_keep=0.0)
    with pytest.raises(ValueError):
        AugmentConfig(crop_keep=1.2)
    with pytest.raises(ValueError):
        AugmentConfig(jitter=-0.1)


class TestMaskProprio:
    def test_never_masks_at_zero(self):
        p = np.ones(6, np.float32)
        rng = np.random.default_rng(0)
        for _ in range(100):
            np.testing.assert_array_equal(mask_proprio(p, 0.0, rng), p)

    def test_always_masks_at_one(self):
        p = np.ones(6, np.float32)
        rng = np.random.default_rng(0)
        for _ in range(100):
            assert np.all(mask_proprio(p, 1.0, rng) == 0)

    def test_empirical_rate_binomial(self):
        p = np.ones(3, np.float32)
        rng = np.random.default_rng(42)
        n, prob = 100_000, 0.2
        zeroed = sum(mask_proprio(p, prob, rng)[0] == 0 for _ in range(n))
        sigma = np.sqrt(prob * (1 - prob) / n)
        assert abs(zeroed / n - prob) < 3 * sigma

    def test_invalid_prob(self):
        with pytest.raises(ValueError):
            mask_proprio(np.ones(2), 1.5, np.random.default_rng(0))

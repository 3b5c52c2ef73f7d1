import pytest
import torch

from taco.policy import build_tokens, sine_positions_1d, sine_positions_2d


def _maps(b, d, h, w, seed=0):
    g = torch.Generator().manual_seed(seed)
    return torch.randn(b, d, h, w, generator=g)


def test_array_sensor_sequence_length():
    # one camera 7x7 map plus latent, proprio, one tactile token: 1+1+1+49
    b, d = 2, 32
    seq = build_tokens(
        z_latent=torch.randn(b, d),
        z_prop=torch.randn(b, d),
        tactile_tokens=(torch.randn(b, d),),
        image_maps=(_maps(b, d, 7, 7),),
    )
    assert len(seq) == 52
    assert seq.sources[:3] == ("latent", "proprio", "tactile")
    assert seq.sources[3:] == ("image",) * 49


def test_image_tactile_width_concat():
    # tactile 7x7 map merges into the camera 7x7 map: 7x14 -> 98 spatial tokens
    b, d = 1, 16
    seq = build_tokens(
        z_latent=torch.randn(b, d),
        z_prop=torch.randn(b, d),
        image_maps=(_maps(b, d, 7, 7),),
        tactile_map=_maps(b, d, 7, 7, seed=1),
    )
    assert len(seq) == 1 + 1 + 98
    assert "tactile" not in seq.sources


def test_vision_only_sequence():
    b, d = 1, 16
    seq = build_tokens(
        z_latent=torch.randn(b, d),
        z_prop=torch.randn(b, d),
        image_maps=(_maps(b, d, 4, 4),),
    )
    assert len(seq) == 18
    assert set(seq.sources) == {"latent", "proprio", "image"}


def test_width_concat_order_and_content():
    b, d = 1, 8
    cam = _maps(b, d, 2, 3)
    tac = _maps(b, d, 2, 2, seed=2)
    seq = build_tokens(
        z_latent=torch.zeros(b, d),
        z_prop=torch.zeros(b, d),
        image_maps=(cam,),
        tactile_map=tac,
    )
    # row-major flattening over (y, x) of the merged 2x5 map
    merged = torch.cat([cam, tac], dim=3)
    flat = merged.permute(2, 3, 0, 1).reshape(10, b, d)
    torch.testing.assert_close(seq.tokens[2:], flat)


def test_height_mismatch_rejected():
    b, d = 1, 8
    with pytest.raises(ValueError, match="height"):
        build_tokens(
            z_latent=torch.zeros(b, d),
            z_prop=torch.zeros(b, d),
            image_maps=(_maps(b, d, 2, 3),),
            tactile_map=_maps(b, d, 3, 3),
        )


def test_tactile_map_requires_camera():
    with pytest.raises(ValueError, match="camera"):
        build_tokens(
            z_latent=torch.zeros(1, 8),
            z_prop=torch.zeros(1, 8),
            tactile_map=_maps(1, 8, 2, 2),
        )


def test_slot_embeddings_enter_pos_channel():
    b, d = 1, 8
    slots = {
        "latent": torch.full((d,), 1.0),
        "proprio": torch.full((d,), 2.0),
        "tactile": torch.full((d,), 3.0),
    }
    seq = build_tokens(
        z_latent=torch.zeros(b, d),
        z_prop=torch.zeros(b, d),
        tactile_tokens=(torch.zeros(b, d),),
        image_maps=(_maps(b, d, 2, 2),),
        slot_embed=slots,
    )
    assert torch.all(seq.pos[0] == 1.0)
    assert torch.all(seq.pos[1] == 2.0)
    assert torch.all(seq.pos[2] == 3.0)


def test_sine_positions_shapes_and_range():
    p1 = sine_positions_1d(10, 16)
    assert p1.shape == (10, 16)
    assert p1.abs().max() <= 1.0
    p2 = sine_positions_2d(3, 5, 16)
    assert p2.shape == (15, 16)
    # distinct rows for distinct positions
    assert not torch.allclose(p2[0], p2[1])

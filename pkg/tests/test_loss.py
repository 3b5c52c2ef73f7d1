import numpy as np
import pytest
import torch

from taco.policy import compute_loss, kl_to_standard_normal


def brute_force_loss(pred, target, pad, mu, logvar, lam):
    """Element-by-element reference implementation."""
    B, H, A = pred.shape
    recon_total = 0.0
    for b in range(B):
        acc, n = 0.0, 0
        for h in range(H):
            if pad[b, h]:
                continue
            n += 1
            for a in range(A):
                acc += abs(float(pred[b, h, a]) - float(target[b, h, a]))
        recon_total += acc / n
    recon = recon_total / B
    kl_total = 0.0
    for b in range(B):
        for l in range(mu.shape[1]):
            m, lv = float(mu[b, l]), float(logvar[b, l])
            kl_total += 0.5 * (np.exp(lv) + m * m - 1.0 - lv)
    kl = kl_total / B
    return recon + lam * kl, recon, kl


def test_global_minimum_is_zero():
    pred = torch.randn(2, 8, 3, dtype=torch.float64)
    pad = torch.zeros(2, 8, dtype=torch.bool)
    out = compute_loss(pred, pred.clone(), pad, torch.zeros(2, 4, dtype=torch.float64),
                       torch.zeros(2, 4, dtype=torch.float64))
    assert out.total.item() == 0.0
    assert out.recon_l1.item() == 0.0
    assert out.kl.item() == 0.0


def test_kl_closed_form_unit_mean():
    mu = torch.zeros(1, 4, dtype=torch.float64)
    mu[0, 0] = 1.0
    kl = kl_to_standard_normal(mu, torch.zeros(1, 4, dtype=torch.float64))
    assert kl.item() == pytest.approx(0.5)


def test_kl_nonnegative_and_zero_iff_standard():
    g = torch.Generator().manual_seed(0)
    for _ in range(200):
        mu = torch.randn(1, 6, generator=g, dtype=torch.float64)
        logvar = torch.randn(1, 6, generator=g, dtype=torch.float64).clamp(-10, 10)
        kl = kl_to_standard_normal(mu, logvar).item()
        assert kl >= 0.0
        if kl == 0.0:
            assert torch.all(mu == 0) and torch.all(logvar == 0)
    assert kl_to_standard_normal(
        torch.zeros(1, 6, dtype=torch.float64), torch.zeros(1, 6, dtype=torch.float64)
    ).item() == 0.0


def test_matches_brute_force_on_random_tuples():
    g = torch.Generator().manual_seed(42)
    for trial in range(200):
        B = int(torch.randint(1, 4, (1,), generator=g))
        H = int(torch.randint(2, 10, (1,), generator=g))
        A = int(torch.randint(1, 5, (1,), generator=g))
        L = int(torch.randint(1, 6, (1,), generator=g))
        pred = torch.randn(B, H, A, generator=g, dtype=torch.float64)
        target = torch.randn(B, H, A, generator=g, dtype=torch.float64)
        n_real = torch.randint(1, H + 1, (B,), generator=g)
        pad = torch.stack([torch.arange(H) >= n for n in n_real])
        mu = torch.randn(B, L, generator=g, dtype=torch.float64)
        logvar = torch.randn(B, L, generator=g, dtype=torch.float64)
        out = compute_loss(pred, target, pad, mu, logvar, lambda_kl=10.0)
        want_total, want_recon, want_kl = brute_force_loss(pred, target, pad, mu, logvar, 10.0)
        assert out.recon_l1.item() == pytest.approx(want_recon, rel=1e-10)
        assert out.kl.item() == pytest.approx(want_kl, rel=1e-10)
        assert out.total.item() == pytest.approx(want_total, rel=1e-10)
        # identity holds exactly as computed
        assert out.total.item() == out.recon_l1.item() + 10.0 * out.kl.item()


def test_half_padded_chunk_matches_loop():
    g = torch.Generator().manual_seed(7)
    pred = torch.randn(1, 8, 3, generator=g, dtype=torch.float64)
    target = torch.randn(1, 8, 3, generator=g, dtype=torch.float64)
    pad = torch.tensor([[False] * 4 + [True] * 4])
    out = compute_loss(pred, target, pad, torch.zeros(1, 2, dtype=torch.float64),
                       torch.zeros(1, 2, dtype=torch.float64))
    want = (pred[0, :4] - target[0, :4]).abs().sum(1).mean().item()
    assert out.recon_l1.item() == pytest.approx(want, rel=1e-12)


def test_all_rows_padded_rejected():
    pad = torch.ones(1, 4, dtype=torch.bool)
    with pytest.raises(ValueError, match="padded"):
        compute_loss(
            torch.zeros(1, 4, 2), torch.zeros(1, 4, 2), pad,
            torch.zeros(1, 2), torch.zeros(1, 2),
        )


def test_unbatched_inputs_accepted():
    pred = torch.randn(6, 2, dtype=torch.float64)
    target = torch.randn(6, 2, dtype=torch.float64)
    pad = torch.zeros(6, dtype=torch.bool)
    out = compute_loss(pred, target, pad, torch.zeros(3, dtype=torch.float64),
                       torch.zeros(3, dtype=torch.float64))
    want = (pred - target).abs().sum(1).mean().item()
    assert out.recon_l1.item() == pytest.approx(want, rel=1e-12)


def test_padding_insensitive_magnitude():
    # mean-over-unpadded reduction: doubling padding leaves recon unchanged
    g = torch.Generator().manual_seed(3)
    base = torch.randn(1, 4, 2, generator=g, dtype=torch.float64)
    pred8 = torch.cat([base, base[:, -1:].expand(1, 4, 2)], dim=1)
    target = torch.zeros_like(pred8)
    pad8 = torch.tensor([[False] * 4 + [True] * 4])
    out8 = compute_loss(pred8, target, pad8, torch.zeros(1, 2, dtype=torch.float64),
                        torch.zeros(1, 2, dtype=torch.float64))
    out4 = compute_loss(base, target[:, :4], torch.zeros(1, 4, dtype=torch.bool),
                        torch.zeros(1, 2, dtype=torch.float64), torch.zeros(1, 2, dtype=torch.float64))
    assert out8.recon_l1.item() == pytest.approx(out4.recon_l1.item(), rel=1e-12)

import numpy as np
import pytest

from taco.data import load_episode
from taco.repeatability import (
    ProtocolSpec,
    ReadingSeries,
    RepeatabilityReport,
    TrainPhase,
    analyze_repeatability,
    emit_curves,
    episode_to_series,
    reduce_channels,
    simulate_protocol,
)
from taco.rollout import SyntheticSensorModel


def noiseless_model(tau, kind="scalar_force"):
    return SyntheticSensorModel(
        kind=kind, gain=1.0, noise_std=0.0, drift_rate=0.0, hysteresis=0.0,
        time_constant=tau,
    )


def short_spec(n=4, press=2.0, release=1.0):
    return ProtocolSpec(n_episodes=n, press_s=press, release_s=release)


class TestProtocolSim:
    def test_series_shape_and_rate(self):
        eps = simulate_protocol(noiseless_model(0.05), short_spec())
        assert len(eps) == 4
        assert len(eps[0].times) == int(3.0 * 100)
        assert eps[0].times[0] == pytest.approx(0.01)

    def test_drift_raises_resting_values_across_episodes(self):
        model = SyntheticSensorModel(
            kind="scalar_force", drift_rate=0.01, noise_std=0.0, time_constant=0.05
        )
        eps = simulate_protocol(model, short_spec(n=6))
        resting = [reduce_channels(e.values)[0] for e in eps]
        assert all(b > a for a, b in zip(resting, resting[1:]))

    def test_gain_ramp_raises_peaks_toward_plateau(self):
        eps = simulate_protocol(
            noiseless_model(0.02), short_spec(n=10),
            train_phase=TrainPhase(depth=0.4, episodes=2.0),
        )
        peaks = [reduce_channels(e.values).max() for e in eps]
        assert all(b >= a - 1e-12 for a, b in zip(peaks, peaks[1:]))
        assert peaks[-1] - peaks[-2] < 0.2 * (peaks[1] - peaks[0])  # plateau

    def test_noiseless_session_is_perfectly_repeatable(self):
        eps = simulate_protocol(noiseless_model(0.05), short_spec(n=5))
        rep = analyze_repeatability(eps, short_spec(n=5))
        assert rep.episode_std == pytest.approx(0.0, abs=1e-9)
        assert rep.response_time_std_s == pytest.approx(0.0, abs=1e-9)

    def test_audio_kind_uses_1khz_envelope(self):
        model = SyntheticSensorModel(kind="audio_vibration")
        spec = ProtocolSpec.acoustic()
        eps = simulate_protocol(model, ProtocolSpec(2, 3.0, 3.0))
        assert len(eps[0].times) == 6 * 1000


class TestAnalyze:
    @pytest.mark.parametrize("tau", [0.02, 0.05, 0.2])
    def test_response_time_equals_tau_ln10(self, tau):
        spec = short_spec(n=3, press=max(10 * tau, 1.0), release=0.5)
        eps = simulate_protocol(noiseless_model(tau), spec)
        rep = analyze_repeatability(eps, spec)
        assert rep.response_time_mean_s == pytest.approx(tau * np.log(10.0), abs=0.01)
        assert rep.n_excluded == 0

    def test_duplicated_episodes_have_zero_stds(self):
        eps = simulate_protocol(noiseless_model(0.05), short_spec(n=1))
        clones = [ReadingSeries(eps[0].times, eps[0].values.copy(), eps[0].press_s) for _ in range(60)]
        rep = analyze_repeatability(clones, short_spec(n=60))
        assert rep.episode_std == 0.0
        assert rep.response_time_std_s == 0.0

    def test_scale_invariance(self):
        model = SyntheticSensorModel(
            kind="scalar_force", noise_std=0.01, drift_rate=0.001, time_constant=0.05
        )
        spec = short_spec(n=5)
        eps = simulate_protocol(model, spec, rng=np.random.default_rng(3))
        scaled = [ReadingSeries(e.times, 37.5 * e.values, e.press_s) for e in eps]
        a = analyze_repeatability(eps, spec)
        b = analyze_repeatability(scaled, spec)
        assert a.response_time_mean_s == b.response_time_mean_s
        assert a.episode_std == pytest.approx(b.episode_std, rel=1e-12)
        np.testing.assert_allclose(a.mean_curve, b.mean_curve, rtol=1e-12)

    def test_channel_reduction_identity_for_scalar(self):
        vals = np.random.default_rng(0).uniform(size=(50, 1))
        np.testing.assert_array_equal(reduce_channels(vals), vals[:, 0])

    def test_channel_reduction_max_for_arrays(self):
        vals = np.random.default_rng(0).uniform(size=(10, 3, 4))
        np.testing.assert_array_equal(reduce_channels(vals), vals.reshape(10, -1).max(1))

    def test_never_reaching_threshold_excluded(self):
        spec = short_spec(n=3, press=1.0, release=0.5)
        eps = simulate_protocol(noiseless_model(0.02), spec)
        # flatten one episode to zero: it never crosses any response threshold
        dead = ReadingSeries(eps[0].times, np.zeros_like(eps[0].values), eps[0].press_s)
        rep = analyze_repeatability([dead] + eps[1:], spec)
        assert rep.n_excluded == 1

    def test_analyzer_recovers_tau_within_5pct(self):
        for tau in (0.02, 0.05, 0.2):
            spec = short_spec(n=3, press=max(10 * tau, 1.0), release=0.2)
            eps = simulate_protocol(noiseless_model(tau), spec)
            rep = analyze_repeatability(eps, spec)
            tau_hat = rep.response_time_mean_s / np.log(10.0)
            assert abs(tau_hat - tau) / tau < 0.05

    def test_too_few_episodes_rejected(self):
        eps = simulate_protocol(noiseless_model(0.05), short_spec(n=1))
        with pytest.raises(ValueError, match="at least 2"):
            analyze_repeatability(eps, short_spec(n=1))

    def test_episode_shorter_than_press_rejected(self):
        eps = simulate_protocol(noiseless_model(0.05), short_spec(n=2, press=1.0))
        with pytest.raises(ValueError, match="shorter"):
            analyze_repeatability(eps, ProtocolSpec(2, press_s=10.0, release_s=0.0))


class TestEmit:
    def test_one_plot_and_summaries_per_sensor(self, tmp_path):
        spec = short_spec(n=3)
        eps = simulate_protocol(noiseless_model(0.05), spec)
        rep = analyze_repeatability(eps, spec, sensor_name="lagged")
        files = emit_curves(rep, tmp_path)
        names = {f.name for f in files}
        assert names == {"lagged_curve.png", "summary.csv", "summary.json"}
        import json

        rows = json.loads((tmp_path / "summary.json").read_text())
        assert set(rows[0]) == {"sensor", "response_time_mean", "response_time_std", "std", "n_excluded"}

    def test_curves_bounded(self, tmp_path):
        model = SyntheticSensorModel(kind="scalar_force", noise_std=0.05, time_constant=0.03)
        spec = short_spec(n=6)
        eps = simulate_protocol(model, spec, rng=np.random.default_rng(1))
        rep = analyze_repeatability(eps, spec, sensor_name="noisy")
        assert rep.mean_curve.min() >= 0.0 and rep.mean_curve.max() <= 1.0
        emit_curves(rep, tmp_path)


def test_episode_format_adapter(tmp_path):
    # recorded press-release data in the standard episode format round-trips
    from taco.data import Stream, StreamSpec, make_episode, write_episode

    times = np.arange(300) / 100.0
    vals = (1 - np.exp(-times / 0.05)).astype(np.float32).reshape(-1, 1)
    vals[times > 2.0] = 0.0
    tactile = Stream(StreamSpec("touch", "tactile", 100.0, (1,)), times + 0.5, vals)
    actions = Stream(
        StreamSpec("actions", "action", 10.0, (1,)),
        np.arange(30) / 10.0 + 0.5,
        np.zeros((30, 1), np.float32),
    )
    ep = make_episode("press", [actions, tactile])
    loaded = load_episode(write_episode(ep, tmp_path / "press"))
    series = episode_to_series(loaded, press_s=2.0)
    assert series.times[0] == 0.0
    assert len(series.values) == 300

import numpy as np
import pytest

from taco.rollout import ContactForces, SensorSim, SyntheticSensorModel, synth_tactile


def test_first_order_step_response():
    # noiseless, driftless: reading(t) = gain * F * (1 - exp(-t/tau))
    tau, gain, F, dt = 0.05, 2.0, 3.0, 0.01
    model = SyntheticSensorModel(kind="scalar_force", gain=gain, time_constant=tau)
    sim = SensorSim(model)
    contact = ContactForces(normal=F, contact=True)
    for k in range(1, 50):
        r = sim.step(contact, dt)
        expected = gain * F * (1 - np.exp(-k * dt / tau))
        assert r[0] == pytest.approx(expected, rel=1e-6)


def test_drift_isolation():
    model = SyntheticSensorModel(kind="scalar_force", drift_rate=0.3)
    sim = SensorSim(model)
    for k in range(1, 20):
        r = sim.step(ContactForces(), 0.1)
        assert r[0] == pytest.approx(0.3 * k * 0.1, rel=1e-6)


def test_hysteresis_offset_on_release():
    model = SyntheticSensorModel(kind="scalar_force", hysteresis=0.1, time_constant=0.02)
    sim = SensorSim(model)
    press = ContactForces(normal=5.0, contact=True)
    for _ in range(100):
        sim.step(press, 0.01)
    for _ in range(400):
        r = sim.step(ContactForces(), 0.01)
    assert r[0] == pytest.approx(0.1 * 5.0, rel=1e-3)  # settles at h * peak, not 0


def test_taxel_array_blob_scales_with_force():
    model = SyntheticSensorModel(kind="taxel_array", time_constant=0.01)
    sim = SensorSim(model)
    r = None
    for _ in range(200):
        r = sim.step(ContactForces(normal=4.0, contact=True), 0.01)
    assert r.shape == (12, 32)
    center = r[6, 16]
    assert center == pytest.approx(4.0, rel=0.05)
    assert r[0, 0] < center  # blob falls off toward the edges


def test_force_3axis_channels():
    model = SyntheticSensorModel(kind="force_3axis", time_constant=0.01)
    sim = SensorSim(model)
    r = None
    for _ in range(300):
        r = sim.step(ContactForces(normal=6.0, tangential=2.0, contact=True), 0.01)
    assert r.shape == (5, 3)
    np.testing.assert_allclose(r[:, 0], 0.0, atol=1e-9)
    assert r[0, 2] == pytest.approx(6.0, rel=0.02)  # normal on z
    assert r[0, 1] == pytest.approx(2.0, rel=0.02)  # load on y
    assert r[4, 2] > r[0, 2]  # fixed per-unit gain spread


def test_audio_burst_on_slip_vs_silence():
    model = SyntheticSensorModel(kind="audio_vibration")
    sim = SensorSim(model, rng=np.random.default_rng(0))
    quiet = sim.step(ContactForces(), 0.1)
    slip = sim.step(ContactForces(normal=1.0, contact=True, slipping=True), 0.1)
    assert float((slip**2).mean()) > 100 * float((quiet**2).mean())


def test_audio_onset_burst_energy():
    model = SyntheticSensorModel(kind="audio_vibration")
    sim = SensorSim(model, rng=np.random.default_rng(1))
    base = sim.step(ContactForces(), 0.1)
    onset = sim.step(ContactForces(normal=1.0, contact=True, contact_onset=True), 0.1)
    assert float((onset**2).sum()) > 10 * float((base**2).sum())


def test_functional_wrapper_threads_state():
    model = SyntheticSensorModel(kind="scalar_force", time_constant=0.05)
    contact = ContactForces(normal=1.0, contact=True)
    r1, sim = synth_tactile(contact, model, 0.05)
    r2, sim = synth_tactile(contact, model, 0.05, sim)
    assert r2[0] > r1[0]  # lag keeps charging


def test_invalid_models_rejected():
    with pytest.raises(ValueError):
        SyntheticSensorModel(kind="smell")
    with pytest.raises(ValueError):
        SyntheticSensorModel(noise_std=-1.0)
    with pytest.raises(ValueError):
        SyntheticSensorModel(time_constant=0.0)
    sim = SensorSim(SyntheticSensorModel())
    with pytest.raises(ValueError):
        sim.step(ContactForces(), 0.0)

import pytest
import numpy
from numpy import radians

from pyclustersim.core.geometry import BodyConstants, GroundTerminal, north_pole
from pyclustersim.core.channel import (LinkBudget, ShadowedRicianParams, half_power_argument, first_null_argument,
                                       normalized_beam_gain, beam_gain_linear, path_gain_linear, noise_power_W,
                                       received_power_W, sample_shadowed_rician_power, sample_shadowed_los_power)
from pyclustersim.core.rng import make_generator
from pyclustersim.utils import linear_to_db

budget = LinkBudget()
body = BodyConstants()
terminal = GroundTerminal()

def rng(seed=0):
    return make_generator(numpy.random.SeedSequence(seed))

def test_budget_validation():
    with pytest.raises(ValueError):
        LinkBudget(bandwidth_hz=0)
    with pytest.raises(ValueError):
        LinkBudget(pathloss_exponent=1.5)
    with pytest.raises(ValueError):
        LinkBudget(beamwidth_3dB_deg=180)
    with pytest.raises(ValueError):
        ShadowedRicianParams(b=0)
    assert budget.eirp_total_W == pytest.approx(10 ** 3.4 * 3e7)

def test_pattern_constants():
    assert half_power_argument == pytest.approx(1.6163, abs=1e-4)
    assert first_null_argument == pytest.approx(3.8317, abs=1e-4)
    assert budget.pattern_scale == pytest.approx(half_power_argument / numpy.sin(radians(10)))

def test_beam_gain():
    assert linear_to_db(beam_gain_linear(0.0, budget)) == pytest.approx(30.0)
    assert linear_to_db(beam_gain_linear(radians(10), budget)) == pytest.approx(27.0, abs=0.01)
    assert normalized_beam_gain(radians(10), budget) == pytest.approx(0.5, abs=1e-9)

    null = numpy.arcsin(first_null_argument / budget.pattern_scale)
    assert normalized_beam_gain(null, budget) < 1e-12

    angles = numpy.linspace(0, null, 50)
    gains = normalized_beam_gain(angles, budget)
    assert numpy.all(numpy.diff(gains) <= 0)
    assert numpy.all(gains <= 1)

def test_path_gain():
    free_space = LinkBudget(pathloss_exponent=2.0)
    assert path_gain_linear(1e-3, free_space) == pytest.approx(1.4228e-4, abs=1e-8)
    assert path_gain_linear(600.0, budget) == pytest.approx(6.587e-22, rel=0.01)
    with pytest.raises(ValueError):
        path_gain_linear(0.0, budget)

def test_noise_power():
    assert noise_power_W(budget) == pytest.approx(1.194e-13, rel=0.005)
    assert noise_power_W(LinkBudget(bandwidth_hz=3e8)) == pytest.approx(10 * noise_power_W(budget))
    assert noise_power_W(LinkBudget(bandwidth_hz=1.0)) == pytest.approx(10 ** -20.4)

def test_received_power():
    nadir = received_power_W(north_pole, terminal, body, budget, 1.0)
    assert nadir.received_power_W == pytest.approx(4.96e-11, rel=0.02)
    assert nadir.slant_range_km == pytest.approx(600.0)
    assert received_power_W(north_pole, terminal, body, budget, 0.0).received_power_W == 0.0

    a = received_power_W((0.1, 0.0, 0.99498743710662), terminal, body, budget, 0.7)
    b = received_power_W((0.0, -0.1, 0.99498743710662), terminal, body, budget, 0.7)
    assert a.received_power_W == pytest.approx(b.received_power_W)

    with pytest.raises(ValueError):
        received_power_W(-north_pole, terminal, body, budget, 1.0)

def test_receiver_gain():
    boosted = received_power_W(north_pole, GroundTerminal(rx_gain_dB=10.0), body, budget, 1.0)
    plain = received_power_W(north_pole, terminal, body, budget, 1.0)
    assert boosted.received_power_W == pytest.approx(10 * plain.received_power_W)

def test_fading_moments():
    p = ShadowedRicianParams()
    n = 10 ** 6
    x = sample_shadowed_rician_power(p, rng(1), n)
    assert numpy.all(x >= 0)
    sem = x.std(ddof=1) / numpy.sqrt(n)
    assert abs(x.mean() - p.mean_power) < 3 * sem
    assert p.mean_power == pytest.approx(1.087)
    x2 = x ** 2
    assert abs(x2.mean() - p.second_moment) < 3 * x2.std(ddof=1) / numpy.sqrt(n)

def test_rayleigh_limit():
    p = ShadowedRicianParams(b=0.126, m=10.1, omega=0.0)
    x = sample_shadowed_rician_power(p, rng(2), 10 ** 6)
    assert x.mean() == pytest.approx(2 * 0.126, rel=0.01)

def test_los_concentration():
    p = ShadowedRicianParams(m=1e6)
    z2 = sample_shadowed_los_power(p, rng(3), 10 ** 5)
    assert z2.var() < p.omega ** 2 * 1e-5

def test_fading_reproducible():
    p = ShadowedRicianParams()
    assert numpy.array_equal(sample_shadowed_rician_power(p, rng(4), 10),
                             sample_shadowed_rician_power(p, rng(4), 10))

def test_received_power_falls_with_distance():
    null = numpy.arcsin(first_null_argument / budget.pattern_scale)
    samples = []
    for psi in numpy.linspace(0.0, 0.99 * body.horizon_central_angle_rad, 400):
        sat = numpy.array([numpy.sin(psi), 0.0, numpy.cos(psi)])
        link = received_power_W(sat, terminal, body, budget, 1.0)
        if link.off_boresight_rad < null:
            samples.append((link.slant_range_km, link.received_power_W))
    assert len(samples) > 10
    distances, powers = numpy.array(samples).T
    assert numpy.all(numpy.diff(distances) > 0)
    assert numpy.all(numpy.diff(powers) <= 0)

    d = numpy.linspace(600.0, 2829.0, 200)
    assert numpy.all(numpy.diff(path_gain_linear(d, budget)) < 0)

def test_nadir_budget_in_db():
    link = received_power_W(north_pole, terminal, body, budget, 1.0)
    eirp_dBW = budget.eirp_density_dBW_per_Hz + 10 * numpy.log10(budget.bandwidth_hz)
    path_dB = (20 * numpy.log10(budget.wavelength_m / (4 * numpy.pi)) -
               10 * budget.pathloss_exponent * numpy.log10(600e3))
    expected_dBW = eirp_dBW + path_dB + terminal.rx_gain_dB
    assert abs(linear_to_db(link.received_power_W) - expected_dBW) < 1e-9
    assert expected_dBW == pytest.approx(linear_to_db(4.96e-11), abs=0.01)

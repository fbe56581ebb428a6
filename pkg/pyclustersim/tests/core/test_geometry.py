import pytest
import numpy
from numpy import pi, radians
from scipy import stats
from scipy.spatial.transform import Rotation

from pyclustersim.core.geometry import (BodyConstants, CapSpec, GroundTerminal, north_pole, angle_between,
                                        sample_sphere_bpp, sample_cap_uniform, place_circular, slant_range_km,
                                        elevation_angle_rad, is_visible, off_boresight_angle_rad,
                                        directions_about, is_unit_direction)
from pyclustersim.core.rng import make_generator

body = BodyConstants()
terminal = GroundTerminal()

def rng(seed=0):
    return make_generator(numpy.random.SeedSequence(seed))

def at_central_angle(psi):
    return numpy.array([numpy.sin(psi), 0.0, numpy.cos(psi)])

def test_body_constants():
    assert body.orbital_radius_km == 6971.0
    with pytest.raises(ValueError):
        BodyConstants(altitude_km=0)
    with pytest.raises(ValueError):
        BodyConstants(earth_radius_km=-1)

def test_sphere_bpp_empty():
    assert sample_sphere_bpp(0, rng()).shape == (0, 3)

def test_sphere_bpp_uniformity():
    n = 10 ** 6
    points = sample_sphere_bpp(n, rng(1))
    assert is_unit_direction(points)

    octant = (points[:, 0] > 0) * 4 + (points[:, 1] > 0) * 2 + (points[:, 2] > 0)
    counts = numpy.bincount(octant, minlength=8)
    assert stats.chisquare(counts).pvalue > 0.001

    assert numpy.all(numpy.abs(points.mean(axis=0)) < 0.005)
    # z is uniform on [-1, 1] for an area-uniform sphere
    assert stats.kstest(points[:, 2], stats.uniform(loc=-1, scale=2).cdf).pvalue > 0.001

def test_cap_containment():
    cap = CapSpec(north_pole, radians(1))
    points = sample_cap_uniform(cap, 1000, rng(2))
    assert numpy.all(cap.contains(points))
    assert numpy.all(angle_between(points, north_pole) <= radians(1) + 1e-12)

    single = sample_cap_uniform(cap, 1, rng(3))
    assert single[0, 2] >= numpy.cos(radians(1))

def test_cap_area_ratio():
    theta_c = radians(1)
    points = sample_cap_uniform(CapSpec((1.0, 2.0, -0.5), theta_c), 10 ** 6, rng(4))
    center = numpy.array((1.0, 2.0, -0.5)) / numpy.linalg.norm((1.0, 2.0, -0.5))
    inner = numpy.mean(angle_between(points, center) <= radians(0.5))
    expected = (1 - numpy.cos(radians(0.5))) / (1 - numpy.cos(theta_c))
    assert abs(inner - expected) < 0.005

def test_hemisphere_cap_matches_sphere():
    n = 10 ** 6
    hemisphere = sample_cap_uniform(CapSpec(north_pole, pi / 2), n, rng(5))
    sphere = sample_sphere_bpp(2 * n, rng(6))
    upper = sphere[sphere[:, 2] >= 0]
    result = stats.ks_2samp(hemisphere[:, 2], upper[:, 2])
    assert result.statistic < 0.005
    assert result.pvalue > 0.001

def test_cap_validation():
    with pytest.raises(ValueError):
        CapSpec(north_pole, 0)
    with pytest.raises(ValueError):
        CapSpec(north_pole, 2.0)
    with pytest.raises(ValueError):
        CapSpec((0, 0, 0), 0.1)

def test_circular_placement():
    cap = CapSpec((0.3, -0.2, 0.9), radians(1))
    ring = place_circular(cap, 9, 0.0)
    assert numpy.allclose(angle_between(ring, cap.center_array), radians(1), atol=1e-12)

    square = place_circular(cap, 4, 0.3)
    separations = angle_between(square, numpy.roll(square, 1, axis=0))
    assert numpy.allclose(separations, separations[0], rtol=1e-9)

    pair = place_circular(cap, 2, 0.0)
    flipped = place_circular(cap, 2, pi)
    assert numpy.allclose(pair, flipped[::-1], atol=1e-12)

def test_directions_about_batch():
    centers = sample_sphere_bpp(5, rng(7))
    points = directions_about(centers, numpy.full((5, 3), 0.1), numpy.zeros((5, 3)))
    assert points.shape == (5, 3, 3)
    assert numpy.allclose(angle_between(points, centers[:, numpy.newaxis, :]), 0.1)

def test_slant_range():
    assert slant_range_km(north_pole, terminal, body) == pytest.approx(600.0)
    horizon = at_central_angle(body.horizon_central_angle_rad)
    assert slant_range_km(horizon, terminal, body) == pytest.approx(2829.3, abs=0.1)
    assert slant_range_km(-north_pole, terminal, body) == pytest.approx(13342.0)

def test_elevation():
    assert elevation_angle_rad(north_pole, terminal, body) == pytest.approx(pi / 2)
    horizon = at_central_angle(body.horizon_central_angle_rad)
    assert abs(elevation_angle_rad(horizon, terminal, body)) < 1e-9
    assert elevation_angle_rad(-north_pole, terminal, body) < 0

def test_visibility():
    assert is_visible(north_pole, terminal, body)
    assert not is_visible(-north_pole, terminal, body)
    mask = elevation_angle_rad(at_central_angle(0.2), terminal, body)
    assert is_visible(at_central_angle(0.2), terminal, body, mask)

def test_off_boresight():
    assert off_boresight_angle_rad(north_pole, terminal, body) == pytest.approx(0.0, abs=1e-7)
    horizon = at_central_angle(body.horizon_central_angle_rad)
    angle = numpy.degrees(off_boresight_angle_rad(horizon, terminal, body))
    assert angle == pytest.approx(numpy.degrees(numpy.arcsin(6371 / 6971)), abs=1e-6)
    assert angle == pytest.approx(66.07, abs=0.05)

def test_terminal_elsewhere():
    t = GroundTerminal((1.0, 0.0, 0.0))
    assert slant_range_km((1.0, 0.0, 0.0), t, body) == pytest.approx(600.0)

def test_link_angles_are_rotation_invariant():
    satellites = sample_sphere_bpp(200, rng(8))
    before = (slant_range_km(satellites, terminal, body), elevation_angle_rad(satellites, terminal, body),
              off_boresight_angle_rad(satellites, terminal, body))
    for rotation in Rotation.random(10, random_state=9):
        moved = GroundTerminal(tuple(rotation.apply(terminal.direction_array)))
        turned = rotation.apply(satellites)
        after = (slant_range_km(turned, moved, body), elevation_angle_rad(turned, moved, body),
                 off_boresight_angle_rad(turned, moved, body))
        assert numpy.allclose(after[0], before[0], rtol=1e-9, atol=1e-9)
        assert numpy.allclose(after[1], before[1], atol=1e-9)
        assert numpy.allclose(after[2], before[2], atol=1e-9)

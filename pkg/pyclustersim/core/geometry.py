"""Spherical geometry on the orbital shell and the Earth's surface.

Directions are unit 3-vectors stored as numpy arrays; a batch of n
directions has shape (n, 3).  Satellites sit at radius
earth_radius_km + altitude_km along their direction, ground terminals at
earth_radius_km.  All angles are in radians.
"""

import numbers

import numpy
from numpy import pi

from pyclustersim.constants import two_pi, default_earth_radius_km
from pyclustersim.utils import is_finite
from pyclustersim.utils.immutable import Immutable

north_pole = numpy.array([0.0, 0.0, 1.0])

class BodyConstants(Immutable):
    __slots__ = ("earth_radius_km", "altitude_km")

    def init_validate(self, earth_radius_km=default_earth_radius_km, altitude_km=600.0):
        earth_radius_km = float(earth_radius_km)
        altitude_km = float(altitude_km)
        if not (earth_radius_km > 0 and is_finite(earth_radius_km)):
            raise ValueError("earth_radius_km must be positive")
        if not (altitude_km > 0 and is_finite(altitude_km)):
            raise ValueError("altitude_km must be positive")
        return (earth_radius_km, altitude_km)

    @property
    def orbital_radius_km(self):
        return self.earth_radius_km + self.altitude_km

    @property
    def horizon_central_angle_rad(self):
        """Central angle at which a satellite sits on the terminal's horizon"""
        return numpy.arccos(self.earth_radius_km / self.orbital_radius_km)

def unit_direction(v):
    """Normalizes v (shape (3,) or (n, 3)) onto the unit sphere"""
    v = numpy.asarray(v, dtype=float)
    assert v.shape[-1] == 3
    norm = numpy.linalg.norm(v, axis=-1, keepdims=True)
    if numpy.any(norm == 0):
        raise ValueError("the zero vector has no direction")
    return v / norm

def is_unit_direction(v, rtol=1e-12):
    v = numpy.asarray(v, dtype=float)
    return v.shape[-1] == 3 and bool(numpy.all(numpy.abs(numpy.linalg.norm(v, axis=-1) - 1) <= rtol))

def direction_tuple(v):
    """A single direction as a hashable tuple, normalized only if needed"""
    v = numpy.asarray(v, dtype=float)
    assert v.shape == (3,)
    if not is_unit_direction(v, 4e-16):
        v = unit_direction(v)
    return tuple(float(x) for x in v)

def angle_between(u, v):
    """Great-circle angle between directions, broadcasting over leading axes

    Uses atan2 of the cross and dot products, which stays accurate for
    nearly parallel directions where arccos loses precision.
    """
    u = numpy.asarray(u, dtype=float)
    v = numpy.asarray(v, dtype=float)
    cross = numpy.linalg.norm(numpy.cross(u, v), axis=-1)
    dot = numpy.sum(u * v, axis=-1)
    return numpy.arctan2(cross, dot)

class CapSpec(Immutable):
    __slots__ = ("center", "polar_angle_rad")

    def init_validate(self, center, polar_angle_rad):
        center = direction_tuple(center)
        polar_angle_rad = float(polar_angle_rad)
        # a hemisphere (pi/2) is admitted so cap sampling can be compared
        # against the sphere restricted to a hemisphere
        if not 0 < polar_angle_rad <= pi / 2:
            raise ValueError("polar_angle_rad must lie in (0, pi/2]")
        return (center, polar_angle_rad)

    @property
    def center_array(self):
        return numpy.array(self.center)

    def contains(self, directions, atol=1e-12):
        return angle_between(directions, self.center_array) <= self.polar_angle_rad + atol

class GroundTerminal(Immutable):
    __slots__ = ("direction", "rx_gain_dB")

    def init_validate(self, direction=tuple(north_pole), rx_gain_dB=0.0):
        direction = direction_tuple(direction)
        return (direction, float(rx_gain_dB))

    @property
    def direction_array(self):
        return numpy.array(self.direction)

def tangent_frames(centers):
    """Returns orthonormal (e1, e2) with e1 x e2 = center, for each center

    Azimuths about a center are measured from e1 towards e2.  The frame is a
    fixed function of the center, so placements are reproducible.
    """
    centers = numpy.atleast_2d(numpy.asarray(centers, dtype=float))
    # helper axis: z, unless the center is too close to it
    helper = numpy.zeros_like(centers)
    near_pole = numpy.abs(centers[:, 2]) > 0.9
    helper[~near_pole, 2] = 1.0
    helper[near_pole, 0] = 1.0
    e1 = numpy.cross(helper, centers)
    e1 /= numpy.linalg.norm(e1, axis=1, keepdims=True)
    e2 = numpy.cross(centers, e1)
    return e1, e2

def directions_about(centers, polar_angles, azimuths):
    """Points at the given polar angle and azimuth about each center

    centers has shape (m, 3); polar_angles and azimuths broadcast to (m, k).
    Returns an array of shape (m, k, 3).
    """
    centers = numpy.atleast_2d(numpy.asarray(centers, dtype=float))
    e1, e2 = tangent_frames(centers)
    polar_angles = numpy.asarray(polar_angles, dtype=float)
    azimuths = numpy.asarray(azimuths, dtype=float)
    polar_angles, azimuths = numpy.broadcast_arrays(polar_angles, azimuths)
    if polar_angles.ndim < 2:
        polar_angles = polar_angles.reshape(len(centers), -1)
        azimuths = azimuths.reshape(len(centers), -1)
    sin_t = numpy.sin(polar_angles)[..., numpy.newaxis]
    cos_t = numpy.cos(polar_angles)[..., numpy.newaxis]
    cos_a = numpy.cos(azimuths)[..., numpy.newaxis]
    sin_a = numpy.sin(azimuths)[..., numpy.newaxis]
    return (cos_t * centers[:, numpy.newaxis, :] +
            sin_t * (cos_a * e1[:, numpy.newaxis, :] + sin_a * e2[:, numpy.newaxis, :]))

def sample_sphere_bpp(n, rng):
    """n directions drawn independently and area-uniformly on the sphere"""
    assert isinstance(n, numbers.Integral) and n >= 0
    z = rng.uniform(-1.0, 1.0, size=n)
    phi = rng.uniform(0.0, two_pi, size=n)
    r = numpy.sqrt(1.0 - z * z)
    return numpy.column_stack((r * numpy.cos(phi), r * numpy.sin(phi), z))

def sample_caps_uniform(centers, polar_angle_rad, n, rng):
    """n area-uniform directions in each of several caps of equal size

    Inverse-CDF sampling: cos(angle) is uniform on [cos(polar_angle), 1].
    Returns shape (len(centers), n, 3).
    """
    assert isinstance(n, numbers.Integral) and n >= 0
    centers = numpy.atleast_2d(numpy.asarray(centers, dtype=float))
    m = len(centers)
    u = rng.uniform(0.0, 1.0, size=(m, n))
    azimuths = rng.uniform(0.0, two_pi, size=(m, n))
    cos_theta = 1.0 - u * (1.0 - numpy.cos(polar_angle_rad))
    if m == 0 or n == 0:
        return numpy.empty((m, n, 3))
    return directions_about(centers, numpy.arccos(numpy.clip(cos_theta, -1.0, 1.0)), azimuths)

def sample_cap_uniform(cap, n, rng):
    assert isinstance(cap, CapSpec)
    return sample_caps_uniform(cap.center_array, cap.polar_angle_rad, n, rng)[0]

def place_circular_batch(centers, polar_angle_rad, n, phases):
    """n directions equally spaced in azimuth on each cap boundary

    Returns shape (len(centers), n, 3); phases holds one starting azimuth per
    center.
    """
    assert isinstance(n, numbers.Integral) and n >= 0
    centers = numpy.atleast_2d(numpy.asarray(centers, dtype=float))
    if len(centers) == 0 or n == 0:
        return numpy.empty((len(centers), n, 3))
    phases = numpy.broadcast_to(numpy.asarray(phases, dtype=float), (len(centers),))
    azimuths = phases[:, numpy.newaxis] + two_pi * numpy.arange(n)[numpy.newaxis, :] / n
    return directions_about(centers, numpy.full(azimuths.shape, polar_angle_rad), azimuths)

def place_circular(cap, n, phase_rad):
    assert isinstance(cap, CapSpec)
    return place_circular_batch(cap.center_array, cap.polar_angle_rad, n, phase_rad)[0]

def _cos_central_angle(sat_dir, terminal):
    assert isinstance(terminal, GroundTerminal)
    sat_dir = numpy.asarray(sat_dir, dtype=float)
    return numpy.clip(sat_dir @ terminal.direction_array, -1.0, 1.0)

def _slant_range_from_cos(cos_psi, body):
    re = body.earth_radius_km
    rs = body.orbital_radius_km
    return numpy.sqrt(numpy.maximum(re * re + rs * rs - 2 * re * rs * cos_psi, 0.0))

def slant_range_km(sat_dir, terminal, body):
    """Straight-line distance between a satellite and a ground terminal"""
    return _slant_range_from_cos(_cos_central_angle(sat_dir, terminal), body)

def link_geometry(sat_dir, terminal, body):
    """Slant range, elevation and off-boresight angle computed together

    Shares the central-angle computation between the three quantities, which
    is what the drop evaluation needs for every satellite at once.
    """
    cos_psi = _cos_central_angle(sat_dir, terminal)
    re = body.earth_radius_km
    rs = body.orbital_radius_km
    d = _slant_range_from_cos(cos_psi, body)
    # the slant range never vanishes since the altitude is positive
    sin_elevation = numpy.clip((rs * cos_psi - re) / d, -1.0, 1.0)
    cos_off_boresight = numpy.clip((rs - re * cos_psi) / d, -1.0, 1.0)
    return d, numpy.arcsin(sin_elevation), numpy.arccos(cos_off_boresight)

def elevation_angle_rad(sat_dir, terminal, body):
    """Elevation of the satellite above the terminal's local horizontal plane

    Negative below the horizon.
    """
    return link_geometry(sat_dir, terminal, body)[1]

def is_visible(sat_dir, terminal, body, min_elevation_rad=0.0):
    # closed threshold: a satellite exactly on the mask is visible
    return elevation_angle_rad(sat_dir, terminal, body) >= min_elevation_rad

def off_boresight_angle_rad(sat_dir, terminal, body):
    """Angle at the satellite between its nadir-pointing boresight and the
    terminal"""
    return link_geometry(sat_dir, terminal, body)[2]

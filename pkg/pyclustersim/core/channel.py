"""Per-link radio model: path gain with a configurable exponent, the
tapered-aperture beam pattern, shadowed-Rician fading and noise.

Powers are linear (watts or dimensionless ratios) inside this module; dB
values only appear in LinkBudget fields.
"""

import numbers
import logging
from functools import lru_cache

import numpy
from numpy import pi
from scipy import special, optimize

from pyclustersim.constants import speed_of_light_m_per_s
from pyclustersim.core.geometry import GroundTerminal, BodyConstants, link_geometry
from pyclustersim.utils import db_to_linear, is_finite
from pyclustersim.utils.immutable import Immutable

logger = logging.getLogger(__name__)

class LinkBudget(Immutable):
    """Radio constants shared by every satellite.

    The EIRP density includes the boresight antenna gain, so the beam pattern
    enters received power only as the normalized gain g <= 1;
    tx_max_gain_dBi is kept for beam_gain_linear() and reporting.
    """

    __slots__ = ("carrier_hz", "bandwidth_hz", "eirp_density_dBW_per_Hz", "noise_density_dBm_per_Hz",
                 "pathloss_exponent", "tx_max_gain_dBi", "beamwidth_3dB_deg", "rx_gain_dB")

    def init_validate(self, carrier_hz=2e9, bandwidth_hz=30e6, eirp_density_dBW_per_Hz=34.0,
                      noise_density_dBm_per_Hz=-174.0, pathloss_exponent=3.0, tx_max_gain_dBi=30.0,
                      beamwidth_3dB_deg=20.0, rx_gain_dB=0.0):
        values = tuple(float(x) for x in (carrier_hz, bandwidth_hz, eirp_density_dBW_per_Hz,
                                          noise_density_dBm_per_Hz, pathloss_exponent, tx_max_gain_dBi,
                                          beamwidth_3dB_deg, rx_gain_dB))
        for name, value in zip(self._immutable_slots, values):
            if not is_finite(value):
                raise ValueError("{} must be finite".format(name))
        if not values[0] > 0:
            raise ValueError("carrier_hz must be positive")
        if not values[1] > 0:
            raise ValueError("bandwidth_hz must be positive")
        if not values[4] >= 2:
            raise ValueError("pathloss_exponent must be at least 2")
        if not 0 < values[6] < 180:
            raise ValueError("beamwidth_3dB_deg must lie in (0, 180)")
        return values

    @property
    def wavelength_m(self):
        return speed_of_light_m_per_s / self.carrier_hz

    @property
    def eirp_total_W(self):
        return db_to_linear(self.eirp_density_dBW_per_Hz) * self.bandwidth_hz

    @property
    def pattern_scale(self):
        """k0 such that the normalized pattern is 1/2 at half the beamwidth"""
        return _pattern_scale(self.beamwidth_3dB_deg)

class ShadowedRicianParams(Immutable):
    """Shadowed-Rician fading: scatter half-power b, Nakagami shape m of the
    line-of-sight amplitude, and average line-of-sight power omega.

    The defaults are the usual "average shadowing" parameter set.
    """

    __slots__ = ("b", "m", "omega")

    def init_validate(self, b=0.126, m=10.1, omega=0.835):
        b, m, omega = float(b), float(m), float(omega)
        if not (b > 0 and is_finite(b)):
            raise ValueError("fading_b must be positive")
        if not (m > 0 and is_finite(m)):
            raise ValueError("fading_m must be positive")
        if not (omega >= 0 and is_finite(omega)):
            raise ValueError("fading_omega must be nonnegative")
        return (b, m, omega)

    @property
    def mean_power(self):
        return 2 * self.b + self.omega

    @property
    def second_moment(self):
        return 4 * self.b ** 2 + 4 * self.b * self.omega + self.omega ** 2 * (1 + 1 / self.m)

class LinkSample(Immutable):
    __slots__ = ("slant_range_km", "off_boresight_rad", "fading_power", "received_power_W")

    def init_validate(self, slant_range_km, off_boresight_rad, fading_power, received_power_W):
        values = tuple(float(x) for x in (slant_range_km, off_boresight_rad, fading_power, received_power_W))
        assert values[2] >= 0 and values[3] >= 0
        return values

def _half_power_residual(u):
    return (2 * special.j1(u) / u) ** 2 - 0.5

# argument of |2 J1(u)/u|^2 where the pattern is at half power
half_power_argument = optimize.brentq(_half_power_residual, 0.5, 3.0, xtol=1e-15)

# first zero of J1, i.e. the first null of the pattern
first_null_argument = special.jn_zeros(1, 1)[0]

@lru_cache(maxsize=64)
def _pattern_scale(beamwidth_3dB_deg):
    return half_power_argument / numpy.sin(numpy.radians(beamwidth_3dB_deg) / 2)

def normalized_beam_gain(theta_off_rad, budget):
    """Relative gain |2 J1(u)/u|^2 with u = k0 sin(theta); equals 1 at boresight"""
    assert isinstance(budget, LinkBudget)
    theta = numpy.asarray(theta_off_rad, dtype=float)
    u = budget.pattern_scale * numpy.sin(theta)
    small = numpy.abs(u) < 1e-8
    safe_u = numpy.where(small, 1.0, u)
    g = numpy.where(small, 1.0, (2 * special.j1(safe_u) / safe_u) ** 2)
    return g if g.ndim else float(g)

def beam_gain_linear(theta_off_rad, budget):
    return db_to_linear(budget.tx_max_gain_dBi) * normalized_beam_gain(theta_off_rad, budget)

def path_gain_linear(d_km, budget):
    """Free-space amplitude at a 1 m reference, then d^-alpha beyond it"""
    assert isinstance(budget, LinkBudget)
    d_m = numpy.asarray(d_km, dtype=float) * 1e3
    if numpy.any(d_m <= 0):
        raise ValueError("distance must be positive")
    gain = (budget.wavelength_m / (4 * pi)) ** 2 * d_m ** (-budget.pathloss_exponent)
    return gain if gain.ndim else float(gain)

def sample_shadowed_los_power(p, rng, size=None):
    """Z^2: Gamma distributed with shape m and mean omega"""
    assert isinstance(p, ShadowedRicianParams)
    if p.omega == 0:
        return numpy.zeros(size) if size is not None else 0.0
    return rng.gamma(p.m, p.omega / p.m, size=size)

def sample_shadowed_rician_power(p, rng, size=None):
    """|X + Z exp(j phi)|^2 for independent scatter X (power 2b), shadowed
    line-of-sight amplitude Z, and uniform phase phi"""
    assert isinstance(p, ShadowedRicianParams)
    sigma = numpy.sqrt(p.b)
    x_re = rng.normal(0.0, sigma, size=size)
    x_im = rng.normal(0.0, sigma, size=size)
    z = numpy.sqrt(sample_shadowed_los_power(p, rng, size))
    phi = rng.uniform(0.0, 2 * pi, size=size)
    return (x_re + z * numpy.cos(phi)) ** 2 + (x_im + z * numpy.sin(phi)) ** 2

def noise_power_W(budget):
    assert isinstance(budget, LinkBudget)
    return db_to_linear(budget.noise_density_dBm_per_Hz - 30) * budget.bandwidth_hz

def received_power_array(sat_dirs, terminal, body, budget, fading_power):
    """Received power for a batch of satellites, all assumed visible

    Returns (received power, slant range, off-boresight angle).
    """
    d, _, off = link_geometry(sat_dirs, terminal, body)
    power = (budget.eirp_total_W * normalized_beam_gain(off, budget) * path_gain_linear(d, budget) *
             db_to_linear(terminal.rx_gain_dB) * numpy.asarray(fading_power, dtype=float))
    return power, d, off

def received_power_W(sat_dir, terminal, body, budget, fading_power, min_elevation_rad=0.0):
    assert isinstance(terminal, GroundTerminal)
    assert isinstance(body, BodyConstants)
    assert isinstance(fading_power, numbers.Real) and fading_power >= 0
    sat_dir = numpy.asarray(sat_dir, dtype=float)
    assert sat_dir.shape == (3,)
    _, elevation, _ = link_geometry(sat_dir, terminal, body)
    if elevation < min_elevation_rad:
        raise ValueError("satellite is not visible from the terminal (elevation {:.3f} deg)".format(
            numpy.degrees(elevation)))
    power, d, off = received_power_array(sat_dir, terminal, body, budget, fading_power)
    return LinkSample(d, off, fading_power, power)

"""Experiment configuration and its flat JSON form.

Degrees and dB live only in the JSON form; the nested records hold radians
where the engine needs them.  Every key defaults to the reference parameter
set (600 km, S-band 2 GHz, 30 MHz, path-loss exponent 3, 30 dBi / 20 degree
beams, 34 dBW/Hz EIRP density, -174 dBm/Hz noise, 1 degree caps, 10% masters).
"""

import difflib
import numbers
import logging
from collections import OrderedDict

import numpy

from pyclustersim.core.geometry import BodyConstants, GroundTerminal
from pyclustersim.core.formation import formation_kinds, circular
from pyclustersim.core.channel import LinkBudget, ShadowedRicianParams
from pyclustersim.core.transmission import SchemeConfig, schemes, interferer_policies, mrt_power_budgets
from pyclustersim.utils import is_finite
from pyclustersim.utils import custom_json as json
from pyclustersim.utils.immutable import Immutable

logger = logging.getLogger(__name__)

default_beta_grid_dB = tuple(float(b) for b in range(-10, 31, 5))

class ConfigurationError(ValueError):
    def __init__(self, field, message):
        super(ConfigurationError, self).__init__("{}: {}".format(field, message))
        self.field = field

class ExperimentConfig(Immutable):
    __slots__ = ("n_satellites", "master_fraction", "formation", "polar_angle_deg", "scheme",
                 "body", "budget", "fading", "n_drops", "seed", "beta_grid_dB",
                 "min_elevation_deg", "failed_slaves_per_cluster")

    def init_validate(self, n_satellites=1000, master_fraction=0.1, formation=circular, polar_angle_deg=1.0,
                      scheme=SchemeConfig(), body=BodyConstants(), budget=LinkBudget(),
                      fading=ShadowedRicianParams(), n_drops=20000, seed=0,
                      beta_grid_dB=default_beta_grid_dB, min_elevation_deg=0.0, failed_slaves_per_cluster=0):
        if not (isinstance(n_satellites, numbers.Integral) and n_satellites >= 1):
            raise ConfigurationError("n_satellites", "must be a positive integer")
        master_fraction = float(master_fraction)
        if not 0 < master_fraction <= 1:
            raise ConfigurationError("master_fraction", "must lie in (0, 1]")
        if formation not in formation_kinds:
            raise ConfigurationError("formation", "must be one of {}".format(", ".join(formation_kinds)))
        polar_angle_deg = float(polar_angle_deg)
        if not 0 < polar_angle_deg <= 90:
            raise ConfigurationError("polar_angle_deg", "must lie in (0, 90]")
        assert isinstance(scheme, SchemeConfig)
        assert isinstance(body, BodyConstants)
        assert isinstance(budget, LinkBudget)
        assert isinstance(fading, ShadowedRicianParams)
        if not (isinstance(n_drops, numbers.Integral) and n_drops >= 1):
            raise ConfigurationError("n_drops", "must be a positive integer")
        if not (isinstance(seed, numbers.Integral) and 0 <= seed < 2 ** 64):
            raise ConfigurationError("seed", "must be an unsigned 64-bit integer")
        beta_grid_dB = tuple(float(b) for b in beta_grid_dB)
        if not beta_grid_dB:
            raise ConfigurationError("beta_grid_dB", "must not be empty")
        if any(b != b for b in beta_grid_dB):
            raise ConfigurationError("beta_grid_dB", "thresholds must be numbers")
        min_elevation_deg = float(min_elevation_deg)
        if not -90 <= min_elevation_deg < 90:
            raise ConfigurationError("min_elevation_deg", "must lie in [-90, 90)")
        if not (isinstance(failed_slaves_per_cluster, numbers.Integral) and failed_slaves_per_cluster >= 0):
            raise ConfigurationError("failed_slaves_per_cluster", "must be a nonnegative integer")
        if scheme.clustered and int(round(n_satellites * master_fraction)) < 1:
            raise ConfigurationError("master_fraction", "leaves no master among {} satellites".format(n_satellites))
        return (int(n_satellites), master_fraction, formation, polar_angle_deg, scheme, body, budget, fading,
                int(n_drops), int(seed), beta_grid_dB, min_elevation_deg, int(failed_slaves_per_cluster))

    @property
    def clustered(self):
        return self.scheme.clustered

    @property
    def n_masters(self):
        return int(round(self.n_satellites * self.master_fraction)) if self.clustered else self.n_satellites

    def slaves_per_cluster(self):
        """Slave count of every cluster, spreading the remainder round-robin"""
        m = self.n_masters
        n_slaves = self.n_satellites - m
        sizes = numpy.full(m, n_slaves // m, dtype=numpy.int64)
        sizes[:n_slaves % m] += 1
        return sizes

    @property
    def polar_angle_rad(self):
        return numpy.radians(self.polar_angle_deg)

    @property
    def min_elevation_rad(self):
        return numpy.radians(self.min_elevation_deg)

    @property
    def terminal(self):
        return GroundTerminal(rx_gain_dB=self.budget.rx_gain_dB)

    def to_json(self):
        return OrderedDict([
            ("n_satellites", self.n_satellites),
            ("master_fraction", self.master_fraction),
            ("formation", self.formation),
            ("polar_angle_deg", self.polar_angle_deg),
            ("scheme", self.scheme.scheme),
            ("interferer_policy", self.scheme.interferer_policy),
            ("mrt_power_budget", self.scheme.mrt_power_budget),
            ("earth_radius_km", self.body.earth_radius_km),
            ("altitude_km", self.body.altitude_km),
            ("carrier_hz", self.budget.carrier_hz),
            ("bandwidth_hz", self.budget.bandwidth_hz),
            ("eirp_density_dBW_per_Hz", self.budget.eirp_density_dBW_per_Hz),
            ("noise_density_dBm_per_Hz", self.budget.noise_density_dBm_per_Hz),
            ("pathloss_exponent", self.budget.pathloss_exponent),
            ("tx_max_gain_dBi", self.budget.tx_max_gain_dBi),
            ("beamwidth_3dB_deg", self.budget.beamwidth_3dB_deg),
            ("rx_gain_dB", self.budget.rx_gain_dB),
            ("fading_b", self.fading.b),
            ("fading_m", self.fading.m),
            ("fading_omega", self.fading.omega),
            ("n_drops", self.n_drops),
            ("seed", self.seed),
            ("beta_grid_dB", list(self.beta_grid_dB)),
            ("min_elevation_deg", self.min_elevation_deg),
            ("failed_slaves_per_cluster", self.failed_slaves_per_cluster),
        ])

    @staticmethod
    def from_json(json_object):
        """Builds a config from its flat JSON form, filling in defaults

        Unknown keys are rejected, naming the closest valid key.
        """
        if not isinstance(json_object, dict):
            raise ConfigurationError("config", "must be a JSON object")
        for key in json_object:
            if key not in _schema:
                close = difflib.get_close_matches(key, list(_schema), n=1, cutoff=0.3)
                hint = "; did you mean {!r}?".format(close[0]) if close else ""
                raise ConfigurationError(key, "unknown key{}".format(hint))
        v = {key: _schema[key](key, value) for key, value in json_object.items()}

        def group(cls, keys, **renames):
            kwargs = {renames.get(k, k): v[k] for k in keys if k in v}
            try:
                return cls(**kwargs)
            except ConfigurationError:
                raise
            except ValueError as e:
                field = next((k for k in keys if k in str(e)), keys[0])
                raise ConfigurationError(field, str(e))

        scheme = group(SchemeConfig, ("scheme", "interferer_policy", "mrt_power_budget"))
        body = group(BodyConstants, ("earth_radius_km", "altitude_km"))
        budget = group(LinkBudget, ("carrier_hz", "bandwidth_hz", "eirp_density_dBW_per_Hz",
                                    "noise_density_dBm_per_Hz", "pathloss_exponent", "tx_max_gain_dBi",
                                    "beamwidth_3dB_deg", "rx_gain_dB"))
        fading = group(ShadowedRicianParams, ("fading_b", "fading_m", "fading_omega"),
                       fading_b="b", fading_m="m", fading_omega="omega")
        top = {k: v[k] for k in ("n_satellites", "master_fraction", "formation", "polar_angle_deg", "n_drops",
                                 "seed", "beta_grid_dB", "min_elevation_deg", "failed_slaves_per_cluster")
               if k in v}
        return ExperimentConfig(scheme=scheme, body=body, budget=budget, fading=fading, **top)

    def config_hash(self):
        return json.digest(self.to_json())

def _integer(key, value):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ConfigurationError(key, "expected an integer, got {!r}".format(value))
    return value

def _number(key, value):
    if isinstance(value, bool) or not isinstance(value, numbers.Real) or not is_finite(value):
        raise ConfigurationError(key, "expected a finite number, got {!r}".format(value))
    return value

def _choice(options):
    def check(key, value):
        if value not in options:
            raise ConfigurationError(key, "expected one of {}, got {!r}".format(", ".join(options), value))
        return value
    return check

def _optional(check):
    def inner(key, value):
        return None if value is None else check(key, value)
    return inner

def _threshold_list(key, value):
    if not isinstance(value, list):
        raise ConfigurationError(key, "expected a list of thresholds in dB")
    rv = []
    for x in value:
        # infinite thresholds are allowed as sentinels
        if isinstance(x, bool) or not isinstance(x, numbers.Real) or x != x:
            raise ConfigurationError(key, "expected numbers, got {!r}".format(x))
        rv.append(x)
    return rv

_schema = OrderedDict([
    ("n_satellites", _integer),
    ("master_fraction", _number),
    ("formation", _choice(formation_kinds)),
    ("polar_angle_deg", _number),
    ("scheme", _choice(schemes)),
    ("interferer_policy", _optional(_choice(interferer_policies))),
    ("mrt_power_budget", _choice(mrt_power_budgets)),
    ("earth_radius_km", _number),
    ("altitude_km", _number),
    ("carrier_hz", _number),
    ("bandwidth_hz", _number),
    ("eirp_density_dBW_per_Hz", _number),
    ("noise_density_dBm_per_Hz", _number),
    ("pathloss_exponent", _number),
    ("tx_max_gain_dBi", _number),
    ("beamwidth_3dB_deg", _number),
    ("rx_gain_dB", _number),
    ("fading_b", _number),
    ("fading_m", _number),
    ("fading_omega", _number),
    ("n_drops", _integer),
    ("seed", _integer),
    ("beta_grid_dB", _threshold_list),
    ("min_elevation_deg", _number),
    ("failed_slaves_per_cluster", _integer),
])

config_keys = tuple(_schema)

def load_config(path):
    """Reads a config file, or the config embedded in a run manifest"""
    with open(path, encoding="utf-8") as f:
        try:
            json_object = json.load(f)
        except ValueError as e:
            raise ConfigurationError("config", "{} is not valid JSON: {}".format(path, e))
    if isinstance(json_object, dict) and "manifest_version" in json_object:
        json_object = json_object["config"]
    return ExperimentConfig.from_json(json_object)

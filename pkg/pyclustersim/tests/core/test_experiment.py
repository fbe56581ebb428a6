import json as std_json

import pytest
import numpy

from pyclustersim.core.experiment import ExperimentConfig, ConfigurationError, load_config, config_keys
from pyclustersim.core.transmission import SchemeConfig, dps, unclustered
from pyclustersim.utils import custom_json as json

def write(tmpdir, obj, name="config.json"):
    p = tmpdir.join(name)
    p.write(std_json.dumps(obj))
    return str(p)

def test_defaults():
    cfg = ExperimentConfig.from_json({})
    assert cfg == ExperimentConfig()
    assert cfg.body.altitude_km == 600.0
    assert cfg.budget.carrier_hz == 2e9
    assert cfg.budget.bandwidth_hz == 30e6
    assert cfg.budget.pathloss_exponent == 3.0
    assert cfg.budget.tx_max_gain_dBi == 30.0
    assert cfg.budget.beamwidth_3dB_deg == 20.0
    assert cfg.budget.eirp_density_dBW_per_Hz == 34.0
    assert cfg.budget.noise_density_dBm_per_Hz == -174.0
    assert cfg.polar_angle_deg == 1.0
    assert cfg.master_fraction == 0.1

def test_cluster_sizes():
    cfg = ExperimentConfig()
    assert cfg.n_masters == 100
    assert cfg.slaves_per_cluster().tolist() == [9] * 100

    uneven = ExperimentConfig(n_satellites=1005)
    sizes = uneven.slaves_per_cluster()
    assert uneven.n_masters == 100
    assert sizes.sum() == 905
    assert sizes.max() - sizes.min() == 1
    assert sizes[:5].tolist() == [10] * 5

def test_unclustered_masters():
    cfg = ExperimentConfig(n_satellites=7, scheme=SchemeConfig(unclustered))
    assert cfg.n_masters == 7

def test_json_round_trip():
    cfg = ExperimentConfig.from_json({"n_satellites": 10000, "scheme": "dps", "fading_m": 5.0,
                                      "beamwidth_3dB_deg": 15.0, "beta_grid_dB": [0, 10]})
    assert cfg.scheme.scheme == dps
    assert cfg.fading.m == 5.0
    assert ExperimentConfig.from_json(json.loads(json.dumps(cfg.to_json()))) == cfg
    assert list(cfg.to_json()) == list(config_keys)

def test_rejects_master_fraction():
    with pytest.raises(ConfigurationError) as e:
        ExperimentConfig.from_json({"master_fraction": 0})
    assert e.value.field == "master_fraction"

def test_rejects_unknown_key():
    with pytest.raises(ConfigurationError) as e:
        ExperimentConfig.from_json({"beamwidth": 20})
    assert e.value.field == "beamwidth"
    assert "beamwidth_3dB_deg" in str(e.value)

def test_rejects_bad_values():
    for obj, field in [({"n_satellites": 1.5}, "n_satellites"),
                       ({"n_satellites": True}, "n_satellites"),
                       ({"scheme": "jt"}, "scheme"),
                       ({"fading_b": 0}, "fading_b"),
                       ({"fading_omega": -1}, "fading_omega"),
                       ({"bandwidth_hz": -5}, "bandwidth_hz"),
                       ({"altitude_km": 0}, "altitude_km"),
                       ({"scheme": "dps", "interferer_policy": "all_active"}, "interferer_policy"),
                       ({"beta_grid_dB": []}, "beta_grid_dB"),
                       ({"n_satellites": 5, "master_fraction": 0.01}, "master_fraction")]:
        with pytest.raises(ConfigurationError) as e:
            ExperimentConfig.from_json(obj)
        assert e.value.field == field, obj

def test_config_hash():
    a = ExperimentConfig()
    assert len(a.config_hash()) == 16
    assert a.config_hash() == ExperimentConfig.from_json({}).config_hash()
    assert a.config_hash() != a.replace(seed=1).config_hash()

def test_load_config(tmpdir):
    cfg = load_config(write(tmpdir, {"n_satellites": 100, "seed": 9}))
    assert cfg.n_satellites == 100 and cfg.seed == 9

    manifest = {"manifest_version": 1, "config": cfg.to_json()}
    assert load_config(write(tmpdir, manifest, "manifest.json")) == cfg

    p = tmpdir.join("broken.json")
    p.write('{"seed": 1, "seed": 2}')
    with pytest.raises(ConfigurationError):
        load_config(str(p))

def test_infinite_thresholds_allowed():
    cfg = ExperimentConfig.from_json({"beta_grid_dB": [float("-inf"), 0.0]})
    assert cfg.beta_grid_dB[0] == -numpy.inf

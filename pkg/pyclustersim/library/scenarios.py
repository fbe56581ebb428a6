"""Canned experiments: capacity versus constellation size, and coverage
versus SINR threshold."""

from pyclustersim.core.experiment import ExperimentConfig
from pyclustersim.core.formation import circular, uniform
from pyclustersim.core.transmission import SchemeConfig, unclustered, jt_mrt, dps

constellation_sizes = (100, 1000, 10000, 100000)
capacity_schemes = (unclustered, jt_mrt, dps)

def capacity_versus_size(n_drops=20000, seed=0, sizes=constellation_sizes, schemes=capacity_schemes, **kwargs):
    """{(scheme, n_satellites): config} with the reference parameters"""
    return {(scheme, n): ExperimentConfig(n_satellites=n, scheme=SchemeConfig(scheme),
                                          n_drops=n_drops, seed=seed, **kwargs)
            for scheme in schemes for n in sizes}

def coverage_versus_threshold(n_satellites=10000, n_drops=20000, seed=0, scheme=dps, **kwargs):
    """{label: config} for circular and uniform clusters and the
    unclustered baseline, all sharing the default threshold grid.

    Clusters transmit with DPS: under JT-MRT at 10k satellites uniform
    clusters overtake circular ones above roughly 15 dB.
    """
    return {
        circular: ExperimentConfig(n_satellites=n_satellites, formation=circular, scheme=SchemeConfig(scheme),
                                   n_drops=n_drops, seed=seed, **kwargs),
        uniform: ExperimentConfig(n_satellites=n_satellites, formation=uniform, scheme=SchemeConfig(scheme),
                                  n_drops=n_drops, seed=seed, **kwargs),
        unclustered: ExperimentConfig(n_satellites=n_satellites, scheme=SchemeConfig(unclustered),
                                      n_drops=n_drops, seed=seed, **kwargs),
    }

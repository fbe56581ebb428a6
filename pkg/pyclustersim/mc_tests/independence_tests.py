#!/usr/bin/env python

import os
import logging

import numpy

from pyclustersim.core.experiment import ExperimentConfig
from pyclustersim.core.transmission import SchemeConfig, unclustered
from pyclustersim.core.universe import SimulationUniverse

logger = logging.getLogger(__name__)

def test_drop_independence(n_drops=100000, seed=5):
    cfg = ExperimentConfig(n_satellites=100, scheme=SchemeConfig(unclustered), n_drops=n_drops, seed=seed)
    sinr = SimulationUniverse(cfg, os.cpu_count() or 1).records.sinr
    x = numpy.log1p(sinr)
    lag1 = numpy.corrcoef(x[:-1], x[1:])[0, 1]
    logger.info("lag-1 autocorrelation over %d drops: %.5f", n_drops, lag1)
    assert abs(lag1) < 0.01

def test_worker_invariance(n_drops=5000, seed=6):
    cfg = ExperimentConfig(n_satellites=1000, n_drops=n_drops, seed=seed)
    one = SimulationUniverse(cfg, 1).records
    many = SimulationUniverse(cfg, max(2, os.cpu_count() or 1), chunk_size=97).records
    assert numpy.array_equal(one.sinr, many.sinr)
    assert numpy.array_equal(one.outage, many.outage)

if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO)
    test_drop_independence()
    test_worker_invariance()

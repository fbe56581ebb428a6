"""Monte Carlo drops and the estimates built from them.

A drop places every satellite afresh (masters as a binomial point process on
the orbital sphere, slaves according to the formation), draws fresh fading,
associates the terminal and records its SINR.  Drops are independent and
seeded from (seed, drop_index), so any split of the drops over workers gives
the same records; they are always folded in drop_index order.
"""

import numbers
import logging
from collections import OrderedDict

import numpy
from scipy import stats
from joblib import Parallel, delayed

from pyclustersim.core.geometry import sample_sphere_bpp, sample_caps_uniform, place_circular_batch
from pyclustersim.core.formation import circular
from pyclustersim.core.channel import noise_power_W, sample_shadowed_rician_power
from pyclustersim.core.transmission import NetworkRealization, SchemeConfig, SinrSample, evaluate_drop
from pyclustersim.core.experiment import ExperimentConfig
from pyclustersim.core.rng import drop_streams, derive_seed
from pyclustersim.constants import two_pi
from pyclustersim.utils import average_and_stddevmean, db_to_linear
from pyclustersim.utils import custom_json as json
from pyclustersim.utils.immutable import Immutable
from pyclustersim.utils.resource_logging import log_rusage

logger = logging.getLogger(__name__)

z95 = stats.norm.ppf(0.975)

coverage = "coverage"
ergodic_capacity = "ergodic_capacity"
ergodic_throughput_bps = "ergodic_throughput_bps"
outage = "outage"
metrics = (coverage, ergodic_capacity, ergodic_throughput_bps, outage)

min_drops_for_ci = 100

class MetricEstimate(Immutable):
    """One estimate and its 95% interval.

    ci95_low and ci95_high default to value -/+ ci95_halfwidth.  Coverage and
    outage pass the Wilson endpoints, which are not symmetric about value;
    ci95_halfwidth is then the larger distance from value to an endpoint.
    """

    __slots__ = ("metric", "value", "ci95_halfwidth", "n_drops", "seed", "threshold_dB", "ci95_low", "ci95_high")

    def init_validate(self, metric, value, ci95_halfwidth, n_drops, seed, threshold_dB=None,
                      ci95_low=None, ci95_high=None):
        assert metric in metrics
        value = float(value)
        ci95_halfwidth = float(ci95_halfwidth)
        assert ci95_halfwidth >= 0
        if metric in (coverage, outage):
            assert 0 <= value <= 1
        assert (threshold_dB is not None) == (metric == coverage)
        if threshold_dB is not None:
            threshold_dB = float(threshold_dB)
        ci95_low = value - ci95_halfwidth if ci95_low is None else float(ci95_low)
        ci95_high = value + ci95_halfwidth if ci95_high is None else float(ci95_high)
        assert ci95_low <= value <= ci95_high
        return (metric, value, ci95_halfwidth, int(n_drops), int(seed), threshold_dB, ci95_low, ci95_high)

    @property
    def ci95(self):
        return (self.ci95_low, self.ci95_high)

    def to_json(self):
        return OrderedDict((attr, getattr(self, attr)) for attr in self._immutable_slots)

def wilson_interval(successes, n, z=z95):
    """Center and half-width of the Wilson score interval"""
    assert n > 0
    p = successes / n
    denominator = 1 + z * z / n
    center = (p + z * z / (2 * n)) / denominator
    halfwidth = z * numpy.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denominator
    return center, halfwidth

def proportion_estimate(metric, successes, n, seed, threshold_dB=None):
    """Estimate of a proportion with its Wilson score interval"""
    p = successes / n
    center, halfwidth = wilson_interval(successes, n)
    # the interval contains p; clip rounding at the ends
    low = min(max(center - halfwidth, 0.0), p)
    high = max(min(center + halfwidth, 1.0), p)
    return MetricEstimate(metric, p, max(p - low, high - p), n, seed, threshold_dB, low, high)

def place_constellation(cfg, streams):
    """Positions and cluster membership of every satellite for one drop"""
    assert isinstance(cfg, ExperimentConfig)
    terminal = cfg.terminal
    masters = sample_sphere_bpp(cfg.n_masters, streams["positions"])
    if not cfg.clustered:
        return NetworkRealization.from_satellites(masters, terminal, cfg.body)

    sizes = cfg.slaves_per_cluster()
    formation_rng = streams["formation"]
    positions = [masters]
    cluster_index = [numpy.arange(len(masters))]
    # at most two distinct cluster sizes: place each group in one batch
    for size in numpy.unique(sizes):
        if size == 0:
            continue
        group = numpy.flatnonzero(sizes == size)
        if cfg.formation == circular:
            phases = formation_rng.uniform(0.0, two_pi, size=len(group))
            slaves = place_circular_batch(masters[group], cfg.polar_angle_rad, int(size), phases)
        else:
            slaves = sample_caps_uniform(masters[group], cfg.polar_angle_rad, int(size), formation_rng)
        survivors = _surviving_slaves(len(group), int(size), cfg.failed_slaves_per_cluster, formation_rng)
        positions.append(slaves[survivors])
        cluster_index.append(numpy.broadcast_to(group[:, numpy.newaxis], survivors.shape)[survivors])
    positions = numpy.concatenate(positions)
    cluster_index = numpy.concatenate(cluster_index)
    is_master = numpy.arange(len(positions)) < len(masters)
    return NetworkRealization(positions, cluster_index, is_master, terminal, cfg.body, clustered=True)

def _surviving_slaves(n_clusters, size, n_failed, rng):
    """Mask of slaves left after n_failed random slaves per cluster fail"""
    alive = numpy.ones((n_clusters, size), dtype=bool)
    if n_failed == 0:
        return alive
    if n_failed >= size:
        alive[:] = False
        return alive
    # a random permutation per cluster; its first n_failed entries fail
    failed = numpy.argsort(rng.uniform(size=(n_clusters, size)), axis=1)[:, :n_failed]
    numpy.put_along_axis(alive, failed, False, axis=1)
    return alive

def run_drop(cfg, drop_index, network_factory=place_constellation, fading_sampler=sample_shadowed_rician_power):
    """SINR of one drop

    network_factory(cfg, streams) and fading_sampler(params, rng, size) can
    be replaced to pin positions or fading, e.g. for closed-form checks.
    """
    assert isinstance(cfg, ExperimentConfig)
    assert isinstance(drop_index, numbers.Integral) and 0 <= drop_index < cfg.n_drops
    streams = drop_streams(cfg.seed, drop_index)
    net = network_factory(cfg, streams)
    return evaluate_drop(net, cfg.scheme, cfg.budget, cfg.fading, noise_power_W(cfg.budget),
                         streams["fading"], streams["selection"], cfg.min_elevation_rad, fading_sampler)

def _run_drop_range(cfg, start, stop, network_factory, fading_sampler):
    records = numpy.empty((stop - start, 4))
    for i, drop_index in enumerate(range(start, stop)):
        s = run_drop(cfg, drop_index, network_factory, fading_sampler)
        records[i] = (s.desired_W, s.interference_W, s.sinr, s.outage)
    return records

class DropRecords(object):
    """Per-drop results of one experiment, ordered by drop_index"""

    def __init__(self, cfg, desired_W, interference_W, sinr, outage):
        self.cfg = cfg
        self.desired_W = numpy.asarray(desired_W, dtype=float)
        self.interference_W = numpy.asarray(interference_W, dtype=float)
        self.sinr = numpy.asarray(sinr, dtype=float)
        self.outage = numpy.asarray(outage, dtype=bool)
        assert self.sinr.shape == self.outage.shape == self.desired_W.shape == self.interference_W.shape

    def __len__(self):
        return len(self.sinr)

    @property
    def noise_W(self):
        return noise_power_W(self.cfg.budget)

class SimulationUniverse(object):
    """Runs the drops of one experiment, optionally over several worker
    processes, and keeps their records.
    """

    def __init__(self, cfg, workers=1, chunk_size=500,
                 network_factory=place_constellation, fading_sampler=sample_shadowed_rician_power, records=None):
        assert isinstance(cfg, ExperimentConfig)
        assert isinstance(workers, numbers.Integral) and workers >= 1
        assert records is None or (isinstance(records, DropRecords) and records.cfg == cfg)
        self.cfg = cfg
        self.workers = workers
        self.chunk_size = chunk_size
        self.network_factory = network_factory
        self.fading_sampler = fading_sampler
        self._records = records

    def simulate(self):
        cfg = self.cfg
        logger.info("simulating %d drops of %d satellites (%s, %s; config %s, seed %d, %d workers)",
                    cfg.n_drops, cfg.n_satellites, cfg.scheme.scheme, cfg.formation,
                    cfg.config_hash(), cfg.seed, self.workers)
        if cfg.n_drops < min_drops_for_ci:
            logger.warning("only %d drops: confidence intervals assume at least %d", cfg.n_drops, min_drops_for_ci)
        chunks = [(start, min(start + self.chunk_size, cfg.n_drops))
                  for start in range(0, cfg.n_drops, self.chunk_size)]
        with log_rusage(logger, "simulated {} drops".format(cfg.n_drops), n_items=cfg.n_drops):
            if self.workers == 1:
                parts = [_run_drop_range(cfg, start, stop, self.network_factory, self.fading_sampler)
                         for start, stop in chunks]
            else:
                parts = Parallel(n_jobs=self.workers)(
                    delayed(_run_drop_range)(cfg, start, stop, self.network_factory, self.fading_sampler)
                    for start, stop in chunks)
        # Parallel returns results in submission order, i.e. drop_index order
        records = numpy.concatenate(parts)
        self._records = DropRecords(cfg, records[:, 0], records[:, 1], records[:, 2], records[:, 3] != 0)
        logger.info("outage in %d of %d drops", int(self._records.outage.sum()), cfg.n_drops)
        return self._records

    @property
    def records(self):
        if self._records is None:
            self.simulate()
        return self._records

    def coverage(self, beta_grid_dB=None):
        """P(SINR > beta) for each threshold, with Wilson intervals"""
        records = self.records
        cfg = self.cfg
        n = len(records)
        rv = []
        for beta_dB in (beta_grid_dB if beta_grid_dB is not None else cfg.beta_grid_dB):
            # outage drops carry SINR 0 and so fail every threshold, even -inf dB
            covered = numpy.sum((records.sinr > db_to_linear(beta_dB)) & ~records.outage)
            rv.append(proportion_estimate(coverage, int(covered), n, cfg.seed, beta_dB))
        return rv

    def ergodic_capacity(self):
        """Mean of log2(1 + SINR) in bps/Hz; outage drops count as 0"""
        records = self.records
        capacity = numpy.where(records.outage, 0.0, numpy.log2(1 + records.sinr))
        mean, sem = average_and_stddevmean(capacity)
        return MetricEstimate(ergodic_capacity, mean, z95 * sem, len(records), self.cfg.seed)

    def outage_probability(self):
        records = self.records
        n = len(records)
        k = int(records.outage.sum())
        return proportion_estimate(outage, k, n, self.cfg.seed)

    def all_estimates(self):
        capacity = self.ergodic_capacity()
        return self.coverage() + [capacity, scale_by_bandwidth(capacity, self.cfg.budget.bandwidth_hz),
                                  self.outage_probability()]

def scale_by_bandwidth(estimate, bandwidth_hz):
    assert estimate.metric == ergodic_capacity
    return MetricEstimate(ergodic_throughput_bps, estimate.value * bandwidth_hz,
                          estimate.ci95_halfwidth * bandwidth_hz, estimate.n_drops, estimate.seed)

def estimate_coverage(cfg, workers=1, universe=None):
    universe = universe if universe is not None else SimulationUniverse(cfg, workers)
    return universe.coverage()

def estimate_ergodic_capacity(cfg, workers=1, universe=None):
    universe = universe if universe is not None else SimulationUniverse(cfg, workers)
    return universe.ergodic_capacity()

n_satellites_axis = "n_satellites"
beta_axis = "beta"
scheme_axis = "scheme"
formation_axis = "formation"
beamwidth_axis = "beamwidth"
failed_slaves_axis = "failed_slaves"
sweep_axes = (n_satellites_axis, beta_axis, scheme_axis, formation_axis, beamwidth_axis, failed_slaves_axis)

def _swept_scheme(base, scheme):
    """base with its scheme swapped; an explicitly chosen interferer policy
    carries over when the new scheme allows it"""
    policy = base.interferer_policy
    if policy == SchemeConfig(base.scheme).interferer_policy:
        policy = None
    try:
        return SchemeConfig(scheme, policy, base.mrt_power_budget)
    except ValueError:
        logger.info("interferer policy %s does not apply to %s; using its default", policy, scheme)
        return SchemeConfig(scheme, mrt_power_budget=base.mrt_power_budget)

def apply_axis(cfg, axis, value):
    """The config of one sweep cell"""
    if axis == n_satellites_axis:
        return cfg.replace(n_satellites=int(value))
    elif axis == scheme_axis:
        return cfg.replace(scheme=_swept_scheme(cfg.scheme, value))
    elif axis == formation_axis:
        return cfg.replace(formation=value)
    elif axis == beamwidth_axis:
        return cfg.replace(budget=cfg.budget.replace(beamwidth_3dB_deg=float(value)))
    elif axis == failed_slaves_axis:
        return cfg.replace(failed_slaves_per_cluster=int(value))
    elif axis == beta_axis:
        return cfg.replace(beta_grid_dB=(float(value),))
    raise ValueError("unknown sweep axis: {!r}".format(axis))

class SweepRow(Immutable):
    __slots__ = ("axis", "axis_value", "cfg", "estimate")

    def init_validate(self, axis, axis_value, cfg, estimate):
        assert isinstance(cfg, ExperimentConfig)
        assert isinstance(estimate, MetricEstimate)
        return (axis, axis_value, cfg, estimate)

def sweep(cfg, axis, values, workers=1):
    """One set of estimates per axis value

    Cells get independent seeds derived from (seed, axis, value).  The
    threshold axis instead reuses one set of drops for every threshold.
    Returns (rows, cell seeds by value).
    """
    assert isinstance(cfg, ExperimentConfig)
    if axis not in sweep_axes:
        raise ValueError("unknown sweep axis: {!r}".format(axis))
    values = list(values)
    if not values:
        raise ValueError("a sweep needs at least one value")
    rows = []
    cell_seeds = OrderedDict()
    if axis == beta_axis:
        universe = SimulationUniverse(cfg, workers)
        for estimate in universe.coverage([float(v) for v in values]):
            rows.append(SweepRow(axis, estimate.threshold_dB, cfg, estimate))
        cell_seeds[str(axis)] = cfg.seed
        return rows, cell_seeds
    for value in values:
        cell = apply_axis(cfg, axis, value)
        cell = cell.replace(seed=derive_seed(cfg.seed, axis, value))
        cell_seeds[str(value)] = cell.seed
        logger.info("sweep cell %s=%s: seed %d", axis, value, cell.seed)
        universe = SimulationUniverse(cell, workers)
        for estimate in universe.all_estimates():
            rows.append(SweepRow(axis, value, cell, estimate))
    return rows, cell_seeds

def _save_universe_to_hdf5(universe, h5group):
    assert isinstance(universe, SimulationUniverse)

    # make sure we've provided an empty h5group
    if h5group.attrs or h5group.keys():
        raise Exception("h5group is not empty")

    records = universe.records
    h5group.attrs["config_json"] = json.dumps(universe.cfg.to_json())
    h5group.attrs["noise_W"] = records.noise_W
    h5group.create_dataset("desired_W", data=records.desired_W)
    h5group.create_dataset("interference_W", data=records.interference_W)
    h5group.create_dataset("sinr", data=records.sinr)
    h5group.create_dataset("outage", data=records.outage)
    h5group.file.flush()

class RestoredUniverse(SimulationUniverse):
    def __init__(self, h5group):
        cfg = ExperimentConfig.from_json(json.loads(h5group.attrs["config_json"]))
        records = DropRecords(cfg, h5group["desired_W"][()], h5group["interference_W"][()],
                              h5group["sinr"][()], h5group["outage"][()])
        super(RestoredUniverse, self).__init__(cfg, records=records)

    def simulate(self):
        raise RuntimeError("a restored universe holds its records already")

def _load_universe_from_hdf5(h5group):
    return RestoredUniverse(h5group)

SimulationUniverse.to_hdf5 = _save_universe_to_hdf5
SimulationUniverse.from_hdf5 = staticmethod(_load_universe_from_hdf5)

def drop_sample(records, i):
    """The SinrSample of drop i, rebuilt from stored records"""
    if records.outage[i]:
        return SinrSample.outage_sample(records.noise_W)
    return SinrSample(records.desired_W[i], records.interference_W[i], records.noise_W)

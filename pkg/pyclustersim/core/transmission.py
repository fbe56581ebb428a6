"""Serving association, cooperative combining and SINR for one network drop.

A NetworkRealization holds every satellite of a drop in flat arrays: masters
first, then slaves, each tagged with its cluster index.  An unclustered
network is the special case where every satellite is its own cluster.
"""

import logging

import numpy

from pyclustersim.core.geometry import BodyConstants, GroundTerminal, link_geometry
from pyclustersim.core.formation import ClusterLayout
from pyclustersim.core.channel import (LinkBudget, ShadowedRicianParams, received_power_array,
                                       sample_shadowed_rician_power)
from pyclustersim.utils.immutable import Immutable

logger = logging.getLogger(__name__)

unclustered = "unclustered"
jt_mrt = "jt_mrt"
jt_egt = "jt_egt"
dps = "dps"
schemes = (unclustered, jt_mrt, jt_egt, dps)

all_active = "all_active"
one_per_cluster = "one_per_cluster"
interferer_policies = (all_active, one_per_cluster)

per_satellite = "per_satellite"
cluster_total = "cluster_total"
mrt_power_budgets = (per_satellite, cluster_total)

class SchemeConfig(Immutable):
    __slots__ = ("scheme", "interferer_policy", "mrt_power_budget")

    def init_validate(self, scheme=jt_mrt, interferer_policy=None, mrt_power_budget=cluster_total):
        if scheme not in schemes:
            raise ValueError("unknown scheme: {!r}".format(scheme))
        if interferer_policy is None:
            interferer_policy = one_per_cluster if scheme == dps else all_active
        if interferer_policy not in interferer_policies:
            raise ValueError("unknown interferer_policy: {!r}".format(interferer_policy))
        if mrt_power_budget not in mrt_power_budgets:
            raise ValueError("unknown mrt_power_budget: {!r}".format(mrt_power_budget))
        if scheme == dps and interferer_policy != one_per_cluster:
            raise ValueError("dps mutes all but one member of each cluster: interferer_policy must be one_per_cluster")
        if scheme == unclustered and interferer_policy != all_active:
            raise ValueError("unclustered networks have every satellite active: interferer_policy must be all_active")
        return (scheme, interferer_policy, mrt_power_budget)

    @property
    def clustered(self):
        return self.scheme != unclustered

class SinrSample(Immutable):
    __slots__ = ("desired_W", "interference_W", "noise_W", "sinr", "outage")

    def init_validate(self, desired_W, interference_W, noise_W, sinr=None, outage=False):
        desired_W, interference_W, noise_W = float(desired_W), float(interference_W), float(noise_W)
        assert desired_W >= 0 and interference_W >= 0 and noise_W > 0
        expected = desired_W / (interference_W + noise_W)
        if sinr is None:
            sinr = expected
        assert sinr == expected
        return (desired_W, interference_W, noise_W, float(sinr), bool(outage))

    @classmethod
    def outage_sample(cls, noise_W):
        return cls(0.0, 0.0, noise_W, 0.0, True)

class NetworkRealization(object):
    """All satellite positions of one drop and their cluster membership.

    positions: (N, 3) unit directions; cluster_index: (N,) ints in
    [0, n_clusters); is_master: (N,) bools with exactly one master per
    cluster.
    """

    def __init__(self, positions, cluster_index, is_master, terminal, body, clustered=True):
        positions = numpy.asarray(positions, dtype=float).reshape(-1, 3)
        cluster_index = numpy.asarray(cluster_index, dtype=numpy.int64)
        is_master = numpy.asarray(is_master, dtype=bool)
        assert isinstance(terminal, GroundTerminal)
        assert isinstance(body, BodyConstants)
        assert cluster_index.shape == is_master.shape == (len(positions),)
        n_clusters = int(cluster_index.max()) + 1 if len(cluster_index) else 0
        assert numpy.array_equal(numpy.bincount(cluster_index[is_master], minlength=n_clusters),
                                 numpy.ones(n_clusters, dtype=int)), "each cluster needs exactly one master"
        self.positions = positions
        self.cluster_index = cluster_index
        self.is_master = is_master
        self.terminal = terminal
        self.body = body
        self.clustered = clustered
        self.n_clusters = n_clusters
        self._geometry = None

    @staticmethod
    def from_satellites(satellites, terminal, body):
        n = len(satellites)
        return NetworkRealization(satellites, numpy.arange(n), numpy.ones(n, dtype=bool),
                                  terminal, body, clustered=False)

    @staticmethod
    def from_clusters(clusters, terminal, body):
        assert all(isinstance(c, ClusterLayout) for c in clusters)
        masters = [c.master_array for c in clusters]
        slaves = [c.slave_array for c in clusters]
        positions = numpy.concatenate([numpy.reshape(masters, (-1, 3))] + slaves)
        cluster_index = numpy.concatenate([numpy.arange(len(clusters))] +
                                          [numpy.full(len(s), i) for i, s in enumerate(slaves)])
        is_master = numpy.arange(len(positions)) < len(clusters)
        return NetworkRealization(positions, cluster_index, is_master, terminal, body, clustered=True)

    def __len__(self):
        return len(self.positions)

    @property
    def geometry(self):
        """(slant range, elevation, off-boresight) of every satellite"""
        if self._geometry is None:
            self._geometry = link_geometry(self.positions, self.terminal, self.body)
        return self._geometry

    def visible(self, min_elevation_rad=0.0):
        return self.geometry[1] >= min_elevation_rad

    def cluster_sizes(self):
        return numpy.bincount(self.cluster_index, minlength=self.n_clusters)

    def members(self, cluster):
        return numpy.flatnonzero(self.cluster_index == cluster)

def associate(net, min_elevation_rad=0.0):
    """Index of the serving cluster (or satellite, when unclustered), or None

    Serves the visible master with the shortest slant range; ties go to the
    lowest index.  None marks an outage.
    """
    assert isinstance(net, NetworkRealization)
    candidates = numpy.flatnonzero(net.is_master & net.visible(min_elevation_rad))
    if len(candidates) == 0:
        return None
    slant = net.geometry[0][candidates]
    return int(net.cluster_index[candidates[numpy.argmin(slant)]])

def _check_powers(gamma):
    gamma = numpy.asarray(gamma, dtype=float)
    if gamma.ndim != 1 or len(gamma) == 0:
        raise ValueError("need a nonempty list of received powers")
    assert numpy.all(gamma >= 0)
    return gamma

def desired_power_dps(gamma):
    return float(numpy.max(_check_powers(gamma)))

def desired_power_jt_egt(gamma):
    """Equal-gain combining under a per-satellite power cap: (sum sqrt)^2"""
    return float(numpy.sum(numpy.sqrt(_check_powers(gamma))) ** 2)

def desired_power_jt_mrt(gamma, budget_mode=cluster_total):
    """Maximum ratio transmission

    With one satellite's power split across the cluster the optimum is the
    sum of the powers.  With a cap per satellite every member transmits at
    full power and only phases are aligned, which coincides with EGT.
    """
    gamma = _check_powers(gamma)
    if budget_mode == cluster_total:
        return float(numpy.sum(gamma))
    elif budget_mode == per_satellite:
        return desired_power_jt_egt(gamma)
    raise ValueError("unknown mrt_power_budget: {!r}".format(budget_mode))

def desired_power(gamma, scheme):
    assert isinstance(scheme, SchemeConfig)
    if scheme.scheme in (unclustered, dps):
        return desired_power_dps(gamma)
    elif scheme.scheme == jt_egt:
        return desired_power_jt_egt(gamma)
    return desired_power_jt_mrt(gamma, scheme.mrt_power_budget)

def link_powers(net, budget, fading_power, min_elevation_rad=0.0):
    """Received power from every satellite at the terminal; zero where the
    satellite is below the elevation mask

    fading_power holds one draw per visible satellite, in index order.
    """
    assert isinstance(net, NetworkRealization)
    assert isinstance(budget, LinkBudget)
    visible = net.visible(min_elevation_rad)
    gamma = numpy.zeros(len(net))
    fading_power = numpy.asarray(fading_power, dtype=float)
    assert fading_power.shape == (int(visible.sum()),)
    if len(fading_power):
        gamma[visible] = received_power_array(net.positions[visible], net.terminal, net.body,
                                              budget, fading_power)[0]
    return gamma

def active_interferers(net, serving, scheme, rng):
    """Boolean mask of the satellites transmitting to other users

    all_active: every satellite outside the serving cluster.  one_per_cluster:
    one member of each other cluster, picked uniformly, since its point
    selection serves its own user and is independent of our terminal.
    """
    assert isinstance(scheme, SchemeConfig)
    outside = net.cluster_index != serving if serving is not None else numpy.ones(len(net), dtype=bool)
    if scheme.interferer_policy == all_active:
        return outside
    sizes = net.cluster_sizes()
    order = numpy.argsort(net.cluster_index, kind="stable")
    offsets = numpy.concatenate(([0], numpy.cumsum(sizes)[:-1]))
    picks = numpy.floor(rng.uniform(0.0, 1.0, size=net.n_clusters) * sizes).astype(numpy.int64)
    picks = numpy.minimum(picks, sizes - 1)
    chosen = numpy.zeros(len(net), dtype=bool)
    chosen[order[offsets + picks]] = True
    return chosen & outside

def interference_power(net, serving, scheme, budget, rng, fading=None, gamma=None, min_elevation_rad=0.0):
    """Incoherent sum of the power received from active, visible interferers

    gamma (per-satellite received power including fading) may be given to
    replay a realization; otherwise fresh fading is drawn from rng.
    """
    assert isinstance(net, NetworkRealization)
    if gamma is None:
        fading = fading if fading is not None else ShadowedRicianParams()
        n_visible = int(net.visible(min_elevation_rad).sum())
        gamma = link_powers(net, budget, sample_shadowed_rician_power(fading, rng, n_visible),
                            min_elevation_rad)
    active = active_interferers(net, serving, scheme, rng)
    return float(numpy.sum(gamma[active]))

def sinr(desired_W, interference_W, noise_W):
    return SinrSample(desired_W, interference_W, noise_W)

def evaluate_drop(net, scheme, budget, fading, noise_W, fading_rng, selection_rng,
                  min_elevation_rad=0.0, fading_sampler=sample_shadowed_rician_power):
    """SINR at the terminal for one realization

    Fading and interferer selection use separate random streams, so the
    same positions and fading can be replayed under different schemes.
    """
    assert isinstance(scheme, SchemeConfig)
    serving = associate(net, min_elevation_rad)
    if serving is None:
        logger.debug("outage: no visible %s", "master" if net.clustered else "satellite")
        return SinrSample.outage_sample(noise_W)
    n_visible = int(net.visible(min_elevation_rad).sum())
    gamma = link_powers(net, budget, fading_sampler(fading, fading_rng, n_visible), min_elevation_rad)
    desired = desired_power(gamma[net.members(serving)], scheme)
    interference = interference_power(net, serving, scheme, budget, selection_rng, gamma=gamma,
                                      min_elevation_rad=min_elevation_rad)
    return sinr(desired, interference, noise_W)

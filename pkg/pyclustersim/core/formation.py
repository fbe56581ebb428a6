"""Cluster formations: one master at the center of a spherical cap and its
slaves, either on the cap boundary (circular) or spread over it (uniform).

Circular formations model projected circular orbits kinematically: seen from
the Earth the slave ring turns rigidly about the master, one revolution per
formation period.
"""

import numbers
import logging

import numpy
from scipy.spatial.transform import Rotation

from pyclustersim.constants import two_pi, earth_gm_km3_per_s2
from pyclustersim.core.geometry import (BodyConstants, CapSpec, angle_between, direction_tuple,
                                        place_circular, sample_cap_uniform)
from pyclustersim.utils.immutable import Immutable

logger = logging.getLogger(__name__)

circular = "circular"
uniform = "uniform"
formation_kinds = (circular, uniform)

class FormationError(ValueError):
    pass

def orbital_period_s(body):
    """Period of a circular orbit at the body's altitude (Kepler's third law)"""
    assert isinstance(body, BodyConstants)
    return two_pi * numpy.sqrt(body.orbital_radius_km ** 3 / earth_gm_km3_per_s2)

class FormationClock(Immutable):
    __slots__ = ("period_s", "t_s", "rotation_sign")

    def init_validate(self, period_s=None, t_s=0.0, rotation_sign=1):
        if period_s is None:
            period_s = orbital_period_s(BodyConstants())
        period_s = float(period_s)
        if not period_s > 0:
            raise ValueError("period_s must be positive")
        if rotation_sign not in (1, -1):
            raise ValueError("rotation_sign must be +1 or -1")
        return (period_s, float(t_s), int(rotation_sign))

    def phase_advance_rad(self, dt_s):
        return self.rotation_sign * two_pi * dt_s / self.period_s

    def advanced(self, dt_s):
        return self.replace(t_s=self.t_s + dt_s)

class ClusterLayout(Immutable):
    """A master and its slaves.  The cap is centered on the master.

    Coordinates are stored as tuples so the layout is hashable; use
    master_array and slave_array for computation.  phase_rad is None for
    uniform clusters.
    """

    __slots__ = ("master", "slaves", "kind", "cap", "phase_rad")

    def init_validate(self, master, slaves, kind, cap, phase_rad=None):
        master = direction_tuple(master)
        slaves = tuple(direction_tuple(s) for s in numpy.reshape(numpy.asarray(slaves, dtype=float), (-1, 3)))
        if kind not in formation_kinds:
            raise ValueError("unknown formation kind: {!r}".format(kind))
        assert isinstance(cap, CapSpec)
        assert angle_between(cap.center_array, numpy.array(master)) < 1e-12, "cap must be centered on the master"
        if kind == circular:
            phase_rad = float(phase_rad if phase_rad is not None else 0.0)
        else:
            if phase_rad is not None:
                raise ValueError("uniform clusters have no phase")
        if slaves:
            angles = angle_between(numpy.array(slaves), numpy.array(master))
            assert numpy.all(angles <= cap.polar_angle_rad + 1e-12), "slave outside its cap"
            if kind == circular:
                assert numpy.all(numpy.abs(angles - cap.polar_angle_rad) <= 1e-9), "circular slave off the cap boundary"
        return (master, slaves, kind, cap, phase_rad)

    @property
    def master_array(self):
        return numpy.array(self.master)

    @property
    def slave_array(self):
        return numpy.array(self.slaves).reshape(-1, 3)

    @property
    def members(self):
        """The master followed by the slaves"""
        return (self.master,) + self.slaves

    def __len__(self):
        return 1 + len(self.slaves)

def build_cluster(master, n_slaves, kind, polar_angle_rad, phase_rad=0.0, rng=None):
    assert isinstance(n_slaves, numbers.Integral) and n_slaves >= 0
    cap = CapSpec(master, polar_angle_rad)
    if kind == circular:
        slaves = place_circular(cap, n_slaves, phase_rad)
        return ClusterLayout(cap.center, slaves, kind, cap, phase_rad)
    elif kind == uniform:
        assert rng is not None or n_slaves == 0, "uniform clusters need a random stream"
        slaves = sample_cap_uniform(cap, n_slaves, rng) if n_slaves else numpy.empty((0, 3))
        return ClusterLayout(cap.center, slaves, kind, cap, None)
    raise ValueError("unknown formation kind: {!r}".format(kind))

def advance_phase(cluster, clock, dt_s):
    """Turns the slave ring rigidly about the master by the phase the clock
    accumulates over dt_s"""
    assert isinstance(cluster, ClusterLayout)
    assert isinstance(clock, FormationClock)
    if cluster.kind != circular:
        raise FormationError("only circular clusters have a phase to advance")
    delta = clock.phase_advance_rad(dt_s)
    if cluster.slaves:
        rotation = Rotation.from_rotvec(delta * cluster.master_array)
        slaves = rotation.apply(cluster.slave_array)
    else:
        slaves = ()
    return ClusterLayout(cluster.master, slaves, cluster.kind, cluster.cap, cluster.phase_rad + delta)

def drop_satellite(cluster, index):
    """Removes a failed member.  Index 0 is the master, 1.. the slaves.

    Master failure is a scenario-level event and is rejected here.
    """
    assert isinstance(cluster, ClusterLayout)
    if index == 0:
        raise FormationError("cannot drop the master of a cluster")
    if not 1 <= index <= len(cluster.slaves):
        raise IndexError("cluster has no slave with member index {}".format(index))
    slaves = cluster.slaves[:index - 1] + cluster.slaves[index:]
    logger.debug("dropped member %d, %d slaves remain", index, len(slaves))
    return ClusterLayout(cluster.master, slaves, cluster.kind, cluster.cap, cluster.phase_rad)

def max_isl_distance_km(cluster, body):
    """Longest master-slave chord, both satellites on the orbital shell"""
    assert isinstance(cluster, ClusterLayout)
    assert isinstance(body, BodyConstants)
    if not cluster.slaves:
        return 0.0
    angles = angle_between(cluster.slave_array, cluster.master_array)
    return float(2 * body.orbital_radius_km * numpy.sin(numpy.max(angles) / 2))

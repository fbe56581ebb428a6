"""Functional-split requirements on the inter-satellite link (ISL) between a
master and its slaves, and which splits a given link can carry.

Rates are in Gbps and latencies in ms.  The catalog's "about 100 us" and
"about 1 ms" latency requirements are read as hard upper bounds of 0.1 ms
and 1 ms; "1 to 10 ms" as an upper bound of 10 ms.
"""

import numbers
import logging
from collections import OrderedDict

from pyclustersim.constants import speed_of_light_km_per_ms
from pyclustersim.core.formation import ClusterLayout, max_isl_distance_km
from pyclustersim.core.geometry import BodyConstants
from pyclustersim.utils import is_finite
from pyclustersim.utils.immutable import Immutable

logger = logging.getLogger(__name__)

intra_phy = "intra_phy"
intra_mac = "intra_mac"
pdcp_rlc = "pdcp_rlc"
split_names = (intra_phy, intra_mac, pdcp_rlc)

latency_interpretation = ("latency bounds read as hard upper limits: "
                          "~100 us -> 0.1 ms, ~1 ms -> 1 ms, 1~10 ms -> 10 ms")

# radio configuration the catalog's rate requirements were derived for
rate_derivation = OrderedDict([
    ("bandwidth_mhz", 100),
    ("modulation", "256-QAM"),
    ("antenna_ports", 32),
    ("mimo_layers", 8),
])

class SplitOption(Immutable):
    __slots__ = ("name", "ul_rate_gbps", "dl_rate_gbps", "latency_low_ms", "latency_high_ms", "notes")

    def init_validate(self, name, ul_rate_gbps, dl_rate_gbps, latency_low_ms, latency_high_ms, notes=()):
        ul_rate_gbps, dl_rate_gbps = float(ul_rate_gbps), float(dl_rate_gbps)
        latency_low_ms, latency_high_ms = float(latency_low_ms), float(latency_high_ms)
        if not (ul_rate_gbps > 0 and dl_rate_gbps > 0):
            raise ValueError("rate requirements must be positive")
        if not 0 <= latency_low_ms <= latency_high_ms:
            raise ValueError("need 0 <= latency_low_ms <= latency_high_ms")
        return (name, ul_rate_gbps, dl_rate_gbps, latency_low_ms, latency_high_ms, tuple(notes))

    def to_json(self):
        return OrderedDict([
            ("name", self.name),
            ("ul_rate_gbps", self.ul_rate_gbps),
            ("dl_rate_gbps", self.dl_rate_gbps),
            ("latency_low_ms", self.latency_low_ms),
            ("latency_high_ms", self.latency_high_ms),
            ("notes", list(self.notes)),
        ])

class IslProfile(Immutable):
    """Capacity and one-way latency of a master-slave link.  Zero latency is
    allowed: it is what a master-only cluster with no processing delay has.
    """

    __slots__ = ("capacity_ul_gbps", "capacity_dl_gbps", "one_way_latency_ms")

    def init_validate(self, capacity_ul_gbps, capacity_dl_gbps, one_way_latency_ms):
        values = tuple(float(x) for x in (capacity_ul_gbps, capacity_dl_gbps, one_way_latency_ms))
        if not all(is_finite(x) for x in values):
            raise ValueError("ISL parameters must be finite")
        if not (values[0] > 0 and values[1] > 0):
            raise ValueError("ISL capacities must be positive")
        if values[2] < 0:
            raise ValueError("one_way_latency_ms must be nonnegative")
        return values

    def to_json(self):
        return OrderedDict((attr, getattr(self, attr)) for attr in self._immutable_slots)

_catalog = (
    SplitOption(intra_phy, 86.1, 86.1, 0.0, 0.1, (
        "most centralized: slaves only do RF and low PHY",
        "best cooperative gain (full joint processing at the master)",
        "ISL rate scales with antenna ports and bandwidth",
    )),
    SplitOption(intra_mac, 3.0, 4.0, 0.0, 1.0, (
        "scheduling stays centralized at the master",
        "HARQ runs across the ISL, so latency is tight",
    )),
    SplitOption(pdcp_rlc, 3.0, 4.0, 1.0, 10.0, (
        "dual-connectivity style split with relaxed latency",
        "limited coordination: joint transmission is hard to support",
    )),
)

def split_catalog():
    """The three candidate splits, most centralized first"""
    return list(_catalog)

def split_option(name):
    for option in _catalog:
        if option.name == name:
            return option
    raise KeyError(name)

def isl_latency_ms(distance_km, processing_ms=0.0):
    """One-way propagation delay over the link plus processing time"""
    assert isinstance(distance_km, numbers.Real)
    if distance_km < 0:
        raise ValueError("distance must be nonnegative")
    return distance_km / speed_of_light_km_per_ms + processing_ms

class CriterionCheck(Immutable):
    __slots__ = ("criterion", "required", "available", "passed")

    def init_validate(self, criterion, required, available, passed):
        return (criterion, float(required), float(available), bool(passed))

class SplitAssessment(Immutable):
    """Per-criterion outcome for one split option.  limiting is the first
    failed criterion, or None when the option is feasible."""

    __slots__ = ("option", "checks")

    def init_validate(self, option, checks):
        assert isinstance(option, SplitOption)
        checks = tuple(checks)
        assert all(isinstance(c, CriterionCheck) for c in checks)
        return (option, checks)

    @property
    def limiting(self):
        return next((c.criterion for c in self.checks if not c.passed), None)

    @property
    def feasible(self):
        return self.limiting is None

def assess(option, isl, safety_margin=1.0):
    # requirements scaled by the margin must not exceed capacity, latency
    # must not exceed the option's upper bound
    assert isinstance(option, SplitOption)
    assert isinstance(isl, IslProfile)
    if not safety_margin >= 1:
        raise ValueError("safety_margin must be at least 1")
    ul = option.ul_rate_gbps * safety_margin
    dl = option.dl_rate_gbps * safety_margin
    return SplitAssessment(option, (
        CriterionCheck("ul_rate", ul, isl.capacity_ul_gbps, ul <= isl.capacity_ul_gbps),
        CriterionCheck("dl_rate", dl, isl.capacity_dl_gbps, dl <= isl.capacity_dl_gbps),
        CriterionCheck("latency", option.latency_high_ms, isl.one_way_latency_ms,
                       isl.one_way_latency_ms <= option.latency_high_ms),
    ))

def feasible_splits(isl, safety_margin=1.0):
    return [a.option for a in (assess(o, isl, safety_margin) for o in _catalog) if a.feasible]

class FronthaulReport(object):
    def __init__(self, distance_km, isl, assessments, safety_margin):
        self.distance_km = distance_km
        self.isl = isl
        self.assessments = assessments
        self.safety_margin = safety_margin

    @property
    def feasible(self):
        return [a.option for a in self.assessments if a.feasible]

    def to_json(self):
        return OrderedDict([
            ("max_isl_distance_km", self.distance_km),
            ("isl", self.isl.to_json()),
            ("safety_margin", self.safety_margin),
            ("interpretation", latency_interpretation),
            ("rate_derivation", rate_derivation),
            ("options", [OrderedDict([
                ("split", a.option.to_json()),
                ("feasible", a.feasible),
                ("limiting", a.limiting),
                ("checks", [OrderedDict((attr, getattr(c, attr)) for attr in c._immutable_slots)
                            for c in a.checks]),
            ]) for a in self.assessments]),
        ])

    def format_text(self):
        lines = [
            "longest master-slave ISL: {:.1f} km".format(self.distance_km),
            "ISL: UL {:g} Gbps, DL {:g} Gbps, one-way latency {:.3f} ms".format(
                self.isl.capacity_ul_gbps, self.isl.capacity_dl_gbps, self.isl.one_way_latency_ms),
        ]
        if self.safety_margin != 1:
            lines.append("rate safety margin: x{:g}".format(self.safety_margin))
        for a in self.assessments:
            verdict = "feasible" if a.feasible else "infeasible ({} limited)".format(a.limiting)
            lines.append("  {:<10} {}".format(a.option.name, verdict))
            for c in a.checks:
                lines.append("      {:<8} need {:>8.3f} have {:>8.3f}  {}".format(
                    c.criterion, c.required, c.available, "pass" if c.passed else "FAIL"))
        lines.append("note: " + latency_interpretation)
        return "\n".join(lines)

def advise(cluster, body, isl_capacity, processing_ms=0.0, safety_margin=1.0):
    """Which splits the ISL of this cluster supports

    isl_capacity is (uplink, downlink) in Gbps; the latency is derived from
    the longest master-slave chord of the cluster.
    """
    assert isinstance(cluster, ClusterLayout)
    assert isinstance(body, BodyConstants)
    ul, dl = isl_capacity
    distance = max_isl_distance_km(cluster, body)
    isl = IslProfile(ul, dl, isl_latency_ms(distance, processing_ms))
    report = FronthaulReport(distance, isl, [assess(o, isl, safety_margin) for o in _catalog], safety_margin)
    logger.info("ISL %.1f km, %.3f ms: feasible splits %s", distance, isl.one_way_latency_ms,
                ", ".join(o.name for o in report.feasible) or "none")
    return report

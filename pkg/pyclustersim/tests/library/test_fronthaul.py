import pytest
import numpy
from numpy import radians

from pyclustersim.core.geometry import BodyConstants, north_pole
from pyclustersim.core.formation import build_cluster, max_isl_distance_km, circular
from pyclustersim.library.fronthaul import (SplitOption, IslProfile, split_catalog, split_option, isl_latency_ms,
                                            feasible_splits, advise, intra_phy, intra_mac, pdcp_rlc)
from pyclustersim.utils import custom_json as json

body = BodyConstants()

def names(options):
    return [o.name for o in options]

def test_catalog():
    catalog = split_catalog()
    assert names(catalog) == [intra_phy, intra_mac, pdcp_rlc]
    golden = [(86.1, 86.1, 0.1), (3.0, 4.0, 1.0), (3.0, 4.0, 10.0)]
    assert [(o.ul_rate_gbps, o.dl_rate_gbps, o.latency_high_ms) for o in catalog] == golden
    assert split_option(intra_mac).dl_rate_gbps == 4.0
    assert split_option(pdcp_rlc).latency_low_ms == 1.0
    assert all(o.notes for o in catalog)

    # callers cannot alter the catalog
    catalog.pop()
    assert len(split_catalog()) == 3

def test_split_option_validation():
    with pytest.raises(ValueError):
        SplitOption("x", 0, 1, 0, 1)
    with pytest.raises(ValueError):
        SplitOption("x", 1, 1, 2, 1)
    with pytest.raises(ValueError):
        IslProfile(0, 1, 1)
    with pytest.raises(ValueError):
        IslProfile(1, 1, -1)

def test_latency():
    assert isl_latency_ms(299.792458) == pytest.approx(1.0, abs=1e-6)
    assert isl_latency_ms(121.7) == pytest.approx(0.406, abs=0.001)
    assert isl_latency_ms(0.0, 0.25) == 0.25
    with pytest.raises(ValueError):
        isl_latency_ms(-1.0)

def test_feasible_splits():
    assert names(feasible_splits(IslProfile(100, 100, 0.05))) == [intra_phy, intra_mac, pdcp_rlc]
    assert names(feasible_splits(IslProfile(5, 5, 0.5))) == [intra_mac, pdcp_rlc]
    assert feasible_splits(IslProfile(1, 1, 5)) == []
    assert names(feasible_splits(IslProfile(5, 5, 5))) == [pdcp_rlc]

def test_safety_margin():
    assert names(feasible_splits(IslProfile(5, 5, 0.5), safety_margin=1.5)) == []
    with pytest.raises(ValueError):
        feasible_splits(IslProfile(5, 5, 0.5), safety_margin=0.5)

def test_monotonicity():
    rng = numpy.random.default_rng(0)
    for _ in range(500):
        ul, dl = rng.uniform(0.5, 120, size=2)
        latency = rng.uniform(0, 12)
        base = set(names(feasible_splits(IslProfile(ul, dl, latency))))
        better = set(names(feasible_splits(IslProfile(ul * 1.5, dl * 1.2, latency * 0.5))))
        assert base <= better

def test_advise_circular_cluster():
    cluster = build_cluster(north_pole, 9, circular, radians(1))
    report = advise(cluster, body, (100, 100))
    assert report.distance_km == pytest.approx(121.7, abs=0.1)
    assert report.isl.one_way_latency_ms == pytest.approx(0.406, abs=0.001)
    assert names(report.feasible) == [intra_mac, pdcp_rlc]
    phy = report.assessments[0]
    assert phy.limiting == "latency"
    assert [c.passed for c in phy.checks] == [True, True, False]

    # the report agrees with composing the pieces by hand
    latency = isl_latency_ms(max_isl_distance_km(cluster, body))
    assert report.feasible == feasible_splits(IslProfile(100, 100, latency))

def test_advise_master_only():
    cluster = build_cluster(north_pole, 0, circular, radians(1))
    report = advise(cluster, body, (100, 100))
    assert report.isl.one_way_latency_ms == 0.0
    assert len(report.feasible) == 3
    assert advise(cluster, body, (100, 100), processing_ms=0.5).isl.one_way_latency_ms == 0.5

def test_rate_limited():
    isl = IslProfile(86.0, 86.0, 0.01)
    assert intra_phy not in names(feasible_splits(isl))
    cluster = build_cluster(north_pole, 0, circular, radians(1))
    report = advise(cluster, body, (86.0, 86.0), processing_ms=0.01)
    assert report.assessments[0].limiting == "ul_rate"

def test_report_output():
    cluster = build_cluster(north_pole, 9, circular, radians(1))
    report = advise(cluster, body, (100, 100))
    text = report.format_text()
    assert "infeasible (latency limited)" in text
    assert "hard upper limits" in text
    obj = json.loads(json.dumps(report.to_json()))
    assert [o["feasible"] for o in obj["options"]] == [False, True, True]
    assert obj["rate_derivation"]["antenna_ports"] == 32

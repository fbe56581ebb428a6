"""Command-line entry point: clustersim {run,sweep,advise,selftest}

Exit status is 0 on success, 1 when an estimate or output fails, and 2 for
configuration and usage errors.
"""

import os
import sys
import csv
import logging
import argparse
from collections import OrderedDict
from datetime import datetime, timezone

import numpy

from pyclustersim.core import get_clustersim_version
from pyclustersim.core.experiment import ExperimentConfig, ConfigurationError, load_config
from pyclustersim.core.formation import build_cluster, formation_kinds
from pyclustersim.core.geometry import north_pole
from pyclustersim.core.rng import make_generator
from pyclustersim.core.transmission import schemes
from pyclustersim.core.universe import (SimulationUniverse, estimate_coverage, estimate_ergodic_capacity,
                                        scale_by_bandwidth, sweep, sweep_axes, n_satellites_axis, beta_axis,
                                        scheme_axis, formation_axis, beamwidth_axis, failed_slaves_axis)
from pyclustersim.library.fronthaul import advise
from pyclustersim.utils import custom_json as json
from pyclustersim.utils.value_lists import parse_value_list

logger = logging.getLogger(__name__)

seed_environment_variable = "CLUSTERSIM_SEED"
manifest_version = 1

csv_columns = ("axis", "axis_value", "metric", "scheme", "formation", "n_satellites", "threshold_dB",
               "value", "ci95", "ci95_low", "ci95_high", "n_drops", "seed", "config_hash")

exit_success = 0
exit_failure = 1
exit_usage = 2

_axis_kinds = {
    n_satellites_axis: int,
    failed_slaves_axis: int,
    beta_axis: float,
    beamwidth_axis: float,
    scheme_axis: str,
    formation_axis: str,
}

def _axis_choices(axis):
    return {scheme_axis: schemes, formation_axis: formation_kinds}.get(axis)

def _seed_argument(s):
    try:
        seed = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer, got {!r}".format(s))
    if not 0 <= seed < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return seed

def _positive_int(s):
    try:
        n = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer, got {!r}".format(s))
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n

def parse_config(path):
    """Validated config from a JSON file, or the defaults when path is None"""
    if path is None:
        return ExperimentConfig()
    if not os.path.isfile(path):
        raise ConfigurationError("config", "no such file: {}".format(path))
    return load_config(path)

def resolve_seed(cfg, seed_flag=None, environ=os.environ):
    """--seed beats the environment variable, which beats the config file"""
    if seed_flag is not None:
        return cfg.replace(seed=seed_flag)
    if environ.get(seed_environment_variable):
        try:
            seed = _seed_argument(environ[seed_environment_variable])
        except argparse.ArgumentTypeError as e:
            raise ConfigurationError(seed_environment_variable, str(e))
        return cfg.replace(seed=seed)
    return cfg

def _timestamp():
    return datetime.now(timezone.utc).isoformat()

def _csv_row(axis, axis_value, cfg, estimate):
    return (axis, axis_value, estimate.metric, cfg.scheme.scheme, cfg.formation, cfg.n_satellites,
            "" if estimate.threshold_dB is None else estimate.threshold_dB,
            estimate.value, estimate.ci95_halfwidth, estimate.ci95_low, estimate.ci95_high,
            estimate.n_drops, estimate.seed, cfg.config_hash())

def write_csv(path, rows):
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(csv_columns)
        for row in rows:
            writer.writerow(row)
    logger.info("wrote %d rows to %s", len(rows), path)

def write_manifest(path, manifest):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=4)
        f.write("\n")

def _manifest(command, cfg, started, cell_seeds=None, **extra):
    rv = OrderedDict([
        ("manifest_version", manifest_version),
        ("command", command),
        ("tool_version", get_clustersim_version()),
        ("config", cfg.to_json()),
        ("config_hash", cfg.config_hash()),
        ("seed", cfg.seed),
    ])
    rv.update(extra)
    rv["cell_seeds"] = cell_seeds if cell_seeds is not None else OrderedDict()
    rv["started"] = started
    rv["finished"] = _timestamp()
    return rv

def cmd_run(args):
    cfg = resolve_seed(parse_config(args.config), args.seed)
    started = _timestamp()
    os.makedirs(args.out, exist_ok=True)
    universe = SimulationUniverse(cfg, args.workers)
    capacity = estimate_ergodic_capacity(cfg, universe=universe)
    estimates = estimate_coverage(cfg, universe=universe) + [
        capacity, scale_by_bandwidth(capacity, cfg.budget.bandwidth_hz), universe.outage_probability()]
    for e in estimates:
        logger.info("%s%s: %g [%g, %g]", e.metric,
                    "" if e.threshold_dB is None else " (beta {:g} dB)".format(e.threshold_dB),
                    e.value, e.ci95_low, e.ci95_high)
    write_csv(os.path.join(args.out, "results.csv"), [_csv_row("", "", cfg, e) for e in estimates])
    if args.save_drops:
        import h5py
        with h5py.File(os.path.join(args.out, "drops.h5"), "w") as f:
            universe.to_hdf5(f.create_group("drops"))
    write_manifest(os.path.join(args.out, "manifest.json"),
                   _manifest("run", cfg, started, workers=args.workers))
    return exit_success

def _sweep_values(axis, text):
    try:
        values = parse_value_list(text, _axis_kinds[axis])
    except ValueError as e:
        raise ConfigurationError("--values", str(e))
    choices = _axis_choices(axis)
    if choices is not None:
        for v in values:
            if v not in choices:
                raise ConfigurationError("--values", "{!r} is not one of {}".format(v, ", ".join(choices)))
    return values

def cmd_sweep(args):
    cfg = resolve_seed(parse_config(args.config), args.seed)
    values = _sweep_values(args.axis, args.values)
    started = _timestamp()
    os.makedirs(args.out, exist_ok=True)
    try:
        rows, cell_seeds = sweep(cfg, args.axis, values, args.workers)
    except ValueError as e:
        # a cell built from a swept value may break a config invariant
        raise ConfigurationError(args.axis, str(e))
    write_csv(os.path.join(args.out, "sweep.csv"),
              [_csv_row(r.axis, r.axis_value, r.cfg, r.estimate) for r in rows])
    write_manifest(os.path.join(args.out, "manifest.json"),
                   _manifest("sweep", cfg, started, cell_seeds, axis=args.axis, values=values,
                             workers=args.workers))
    return exit_success

def cmd_advise(args):
    cfg = parse_config(args.config)
    body = cfg.body
    if args.altitude_km is not None:
        try:
            body = body.replace(altitude_km=args.altitude_km)
        except ValueError as e:
            raise ConfigurationError("--altitude-km", str(e))
    polar_angle_deg = args.polar_angle_deg if args.polar_angle_deg is not None else cfg.polar_angle_deg
    if not 0 < polar_angle_deg <= 90:
        raise ConfigurationError("--polar-angle-deg", "must lie in (0, 90]")
    formation = args.formation if args.formation is not None else cfg.formation
    if args.n_slaves is not None:
        n_slaves = args.n_slaves
    else:
        n_slaves = int(cfg.slaves_per_cluster().max()) if cfg.clustered else 0
    if n_slaves < 0:
        raise ConfigurationError("--n-slaves", "must be nonnegative")
    rng = make_generator(numpy.random.SeedSequence(cfg.seed))
    cluster = build_cluster(tuple(north_pole), n_slaves, formation, numpy.radians(polar_angle_deg), rng=rng)
    try:
        report = advise(cluster, body, (args.ul_gbps, args.dl_gbps), args.processing_ms, args.margin)
    except ValueError as e:
        raise ConfigurationError("advise", str(e))
    if args.json:
        print(json.dumps(report.to_json(), indent=4))
    else:
        print(report.format_text())
    return exit_success

def cmd_selftest(args):
    import pytest
    tests_directory = os.path.join(os.path.dirname(os.path.abspath(__file__)), "tests")
    status = pytest.main(["-q", tests_directory])
    if status != 0:
        return exit_failure
    if args.slow:
        from pyclustersim.mc_tests import run_all
        try:
            run_all()
        except AssertionError:
            logger.exception("Monte Carlo acceptance suite failed")
            return exit_failure
    return exit_success

def build_parser():
    parser = argparse.ArgumentParser(prog="clustersim",
                                     description="Monte Carlo simulator for clustered LEO satellite downlinks")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True

    def experiment_arguments(p):
        p.add_argument("--config", metavar="PATH", help="JSON config, or a manifest to rerun")
        p.add_argument("--out", metavar="DIR", required=True)
        p.add_argument("--seed", type=_seed_argument, metavar="U64",
                       help="overrides ${} and the config".format(seed_environment_variable))
        p.add_argument("--workers", type=_positive_int, default=1, metavar="N")

    p = subparsers.add_parser("run", help="coverage, capacity and outage for one config")
    experiment_arguments(p)
    p.add_argument("--save-drops", action="store_true", help="also write every drop to drops.h5")
    p.set_defaults(func=cmd_run)

    p = subparsers.add_parser("sweep", help="estimates along one parameter axis")
    experiment_arguments(p)
    p.add_argument("--axis", choices=sweep_axes, required=True)
    p.add_argument("--values", metavar="LIST", required=True,
                   help="comma separated values; numeric items may be ranges START..STOP:STEP")
    p.set_defaults(func=cmd_sweep)

    p = subparsers.add_parser("advise", help="functional splits a cluster's ISL supports")
    p.add_argument("--config", metavar="PATH")
    p.add_argument("--polar-angle-deg", type=float)
    p.add_argument("--altitude-km", type=float)
    p.add_argument("--n-slaves", type=int)
    p.add_argument("--formation", choices=formation_kinds)
    p.add_argument("--ul-gbps", type=float, required=True)
    p.add_argument("--dl-gbps", type=float, required=True)
    p.add_argument("--processing-ms", type=float, default=0.0)
    p.add_argument("--margin", type=float, default=1.0, help="multiplier on the rate requirements")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(func=cmd_advise)

    p = subparsers.add_parser("selftest", help="run the test suite")
    p.add_argument("--slow", action="store_true", help="include the Monte Carlo acceptance runs")
    p.set_defaults(func=cmd_selftest)
    return parser

def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(asctime)s %(name)s %(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ConfigurationError as e:
        logger.error("configuration error: %s", e)
        return exit_usage
    except Exception:
        logger.exception("%s failed", args.command)
        return exit_failure

if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python

def run_all():
    from pyclustersim.mc_tests.capacity_tests import (test_clustering_crossover, test_scheme_crossover,
                                                      test_interference_collapse)
    test_clustering_crossover()
    test_scheme_crossover()
    test_interference_collapse()

    from pyclustersim.mc_tests.coverage_tests import test_formation_ordering
    test_formation_ordering()

    from pyclustersim.mc_tests.independence_tests import test_drop_independence, test_worker_invariance
    test_drop_independence()
    test_worker_invariance()

if __name__ == "__main__":
    import os
    import sys
    import logging
    sys.path.append(os.path.join(os.path.dirname(__file__), "../.."))

    logging.basicConfig(level=logging.INFO)
    run_all()

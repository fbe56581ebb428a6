from pyclustersim.core.geometry import BodyConstants, CapSpec, GroundTerminal, north_pole
from pyclustersim.core.formation import ClusterLayout, FormationClock, FormationError, circular, uniform
from pyclustersim.core.channel import LinkBudget, ShadowedRicianParams
from pyclustersim.core.transmission import SchemeConfig, SinrSample, unclustered, jt_mrt, jt_egt, dps
from pyclustersim.core.experiment import ExperimentConfig, ConfigurationError, load_config

def get_clustersim_version():
    """git describe of the source tree, or the release version outside a checkout"""
    import os
    from subprocess import check_output, CalledProcessError, DEVNULL
    from pyclustersim import __version__

    try:
        rv = check_output(["git", "describe", "--always", "--dirty"],
                          cwd=os.path.dirname(os.path.abspath(__file__)), stderr=DEVNULL)
    except (CalledProcessError, OSError):
        return __version__
    return rv.decode("utf-8").strip() or __version__

from setuptools import setup

setup(**{
    "name": "pyclustersim",
    "version": "0.3.0",
    "description": "Monte Carlo simulator for clustered LEO satellite downlink networks",
    "packages": [
        "pyclustersim",
        "pyclustersim.core",
        "pyclustersim.library",
        "pyclustersim.utils",
        "pyclustersim.mc_tests",
    ],
    "python_requires": ">=3.7",
    # keep in sync with requirements.txt
    "install_requires": ["numpy>=1.17", "scipy>=1.4", "h5py", "joblib"],
    "extras_require": {"test": ["pytest"]},
    "entry_points": {
        "console_scripts": ["clustersim=pyclustersim.cli:main"],
    },
})

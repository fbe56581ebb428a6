import pytest
import numpy

from pyclustersim.core.rng import drop_streams, derive_seed, drop_stream_names

def test_streams_reproducible():
    a = drop_streams(42, 7)
    b = drop_streams(42, 7)
    assert set(a) == set(drop_stream_names)
    for name in drop_stream_names:
        assert numpy.array_equal(a[name].uniform(size=5), b[name].uniform(size=5))

def test_streams_independent():
    s = drop_streams(42, 7)
    draws = [s[name].uniform(size=5) for name in drop_stream_names]
    assert len({tuple(d) for d in draws}) == len(drop_stream_names)
    assert not numpy.array_equal(drop_streams(42, 8)["positions"].uniform(size=5),
                                 drop_streams(42, 7)["positions"].uniform(size=5))
    assert not numpy.array_equal(drop_streams(43, 7)["positions"].uniform(size=5),
                                 drop_streams(42, 7)["positions"].uniform(size=5))

def test_seed_range():
    drop_streams(2 ** 64 - 1, 0)
    with pytest.raises(ValueError):
        drop_streams(-1, 0)
    with pytest.raises(ValueError):
        derive_seed(2 ** 64, "beta")

def test_derive_seed():
    s = derive_seed(0, "n_satellites", 1000)
    assert s == derive_seed(0, "n_satellites", 1000)
    assert 0 <= s < 2 ** 64
    assert s != derive_seed(0, "n_satellites", 100)
    assert s != derive_seed(1, "n_satellites", 1000)
    assert s != derive_seed(0, "failed_slaves", 1000)

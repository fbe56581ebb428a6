"""Reproducible random streams.

Every drop owns streams derived from (seed, drop_index) alone, so results do
not depend on how drops are spread over workers.  Streams use the
counter-based Philox generator keyed through numpy's SeedSequence hashing.
"""

import hashlib
import numbers

import numpy

# independent streams within one drop
drop_stream_names = ("positions", "formation", "fading", "selection")

def _check_seed(seed):
    assert isinstance(seed, numbers.Integral)
    if not 0 <= seed < 2 ** 64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return int(seed)

def make_generator(seed_sequence):
    return numpy.random.Generator(numpy.random.Philox(seed_sequence))

def drop_streams(seed, drop_index):
    """Dict of named generators for one Monte Carlo drop"""
    seed = _check_seed(seed)
    assert isinstance(drop_index, numbers.Integral) and drop_index >= 0
    root = numpy.random.SeedSequence(seed, spawn_key=(int(drop_index),))
    return {name: make_generator(child)
            for name, child in zip(drop_stream_names, root.spawn(len(drop_stream_names)))}

def derive_seed(seed, *labels):
    """A 64-bit seed derived from a base seed and a sequence of labels

    Used for sweep cells: derive_seed(seed, "n_satellites", 1000).
    """
    seed = _check_seed(seed)
    h = hashlib.sha256(repr(tuple(str(label) for label in labels)).encode("utf-8")).digest()
    words = numpy.frombuffer(h[:16], dtype=numpy.uint32)
    state = numpy.random.SeedSequence([seed & 0xffffffff, seed >> 32] + [int(w) for w in words])
    lo, hi = state.generate_state(2, dtype=numpy.uint32)
    return int(lo) | (int(hi) << 32)

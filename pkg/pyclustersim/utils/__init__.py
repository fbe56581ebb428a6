from math import isinf, isnan

import numpy

def average(seq):
    seq = numpy.asarray(seq, dtype=float)
    assert seq.ndim == 1
    assert len(seq) > 0
    return float(seq.sum() / len(seq))

def stddevmean(seq):
    """Standard error of the mean of a one-dimensional sample

    >>> stddevmean([1.0, 1.0, 1.0])
    0.0
    """
    seq = numpy.asarray(seq, dtype=float)
    assert seq.ndim == 1
    if len(seq) > 1:
        x = average(seq)
        variance = float(numpy.sum((seq - x) ** 2)) / (len(seq) - 1)
        return numpy.sqrt(variance / len(seq))
    else:
        return 0.0

def average_and_stddevmean(seq):
    return average(seq), stddevmean(seq)

def is_finite(x):
    return not (isnan(x) or isinf(x))

def db_to_linear(x_db):
    """Converts a power ratio in dB to linear scale

    >>> db_to_linear(30)
    1000.0
    """
    return 10 ** (numpy.asarray(x_db, dtype=float) / 10) if numpy.ndim(x_db) else 10 ** (x_db / 10.0)

def linear_to_db(x):
    return 10 * numpy.log10(x)

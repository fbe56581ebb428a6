"""Parsing of value lists given on the command line, e.g. for sweeps.

A list is comma separated.  Each item is either a single value or an
inclusive numeric range written START..STOP:STEP (the step defaults to 1).
The ".." separator keeps negative numbers unambiguous.
"""

from decimal import Decimal, InvalidOperation

max_items = 10000

def _parse_range(item):
    bounds, _, step = item.partition(':')
    begin, end = bounds.split('..')
    try:
        begin, end = Decimal(begin.strip()), Decimal(end.strip())
        step = Decimal(step.strip()) if step.strip() else Decimal(1)
    except InvalidOperation:
        raise ValueError("malformed range: {!r}".format(item))
    if not all(x.is_finite() for x in (begin, end, step)):
        raise ValueError("range bounds and step must be finite: {!r}".format(item))
    if step <= 0:
        raise ValueError("range step must be positive: {!r}".format(item))
    if end < begin:
        raise ValueError("range end lies below its beginning: {!r}".format(item))
    try:
        too_long = (end - begin) // step + 1 > max_items
    except InvalidOperation:
        too_long = True
    if too_long:
        raise ValueError("range {!r} expands to more than {} values".format(item, max_items))
    rv = []
    x = begin
    # decimal arithmetic, so that e.g. 0..1:0.1 hits 1 exactly
    while x <= end:
        rv.append(x)
        x += step
    return rv

def _convert(x, kind):
    if kind is int:
        if x != x.to_integral_value():
            raise ValueError("expected an integer, got {}".format(x))
        return int(x)
    return kind(x)

def parse_value_list(s, kind=float):
    """Parses a comma-separated list of values

    >>> parse_value_list("100, 1000,10000", int)
    (100, 1000, 10000)
    >>> parse_value_list("-10..10:5")
    (-10.0, -5.0, 0.0, 5.0, 10.0)
    >>> parse_value_list("dps,jt_mrt", str)
    ('dps', 'jt_mrt')
    """
    rv = []
    for item in s.split(','):
        item = item.strip()
        if not item:
            raise ValueError("empty item in value list {!r}".format(s))
        if kind is str:
            rv.append(item)
        elif '..' in item:
            rv.extend(_convert(x, kind) for x in _parse_range(item))
        else:
            try:
                x = Decimal(item)
            except InvalidOperation:
                raise ValueError("not a number: {!r}".format(item))
            rv.append(_convert(x, kind))
        if len(rv) > max_items:
            raise ValueError("value list has more than {} values".format(max_items))
    if not rv:
        raise ValueError("value list is empty")
    return tuple(rv)

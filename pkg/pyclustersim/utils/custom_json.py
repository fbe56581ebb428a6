import json
import hashlib
from functools import partial
from collections import OrderedDict

import numpy

class CustomEncoder(json.JSONEncoder):
    """This custom JSON encoder can handle numpy scalars and arrays, and any
    object providing a to_json() method.
    """

    def default(self, obj):
        if isinstance(obj, numpy.integer):
            return int(obj)
        if isinstance(obj, numpy.floating):
            return float(obj)
        if isinstance(obj, numpy.bool_):
            return bool(obj)
        if isinstance(obj, numpy.ndarray):
            return obj.tolist()
        if hasattr(obj, "to_json"):
            return obj.to_json()
        return super(CustomEncoder, self).default(obj)

def _reject_duplicate_keys(pairs):
    d = OrderedDict()
    for k, v in pairs:
        if k in d:
            raise ValueError("duplicate key in JSON object: {}".format(k))
        d[k] = v
    return d

class CustomDecoder(json.JSONDecoder):
    """This custom JSON decoder preserves key order and rejects objects with
    repeated keys, which json otherwise resolves silently to the last value.
    """

    def __init__(self, *args, **kwargs):
        super(CustomDecoder, self).__init__(*args, object_pairs_hook=_reject_duplicate_keys, **kwargs)

dumps = partial(json.dumps, cls=CustomEncoder)
dump = partial(json.dump, cls=CustomEncoder)

loads = partial(json.loads, cls=CustomDecoder)
load = partial(json.load, cls=CustomDecoder)

def canonical_dumps(obj):
    return json.dumps(obj, cls=CustomEncoder, sort_keys=True, separators=(",", ":"))

def digest(obj, length=16):
    """Short SHA-256 hex digest of the canonical JSON form of obj"""
    return hashlib.sha256(canonical_dumps(obj).encode("utf-8")).hexdigest()[:length]

"""JSON encoding for complex vectors and matrices.

Complex numbers are two-element arrays ``[re, im]``; vectors are arrays of
those; matrices are arrays of row arrays.
"""

import json

import numpy as np


def encode_complex(z):
    z = complex(z)
    return [z.real, z.imag]


def encode_array(a):
    a = np.asarray(a)
    if a.ndim == 0:
        return encode_complex(a)
    return [encode_array(x) for x in a]


def _is_pair(x):
    return isinstance(x, (list, tuple)) and len(x) == 2 and all(
        isinstance(t, (int, float)) and not isinstance(t, bool) for t in x
    )


def decode_array(obj):
    """Inverse of :func:`encode_array`.

    Bare real numbers are accepted in place of ``[re, im]`` pairs.
    """
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return np.asarray(complex(obj))
    if _is_pair(obj):
        return np.asarray(complex(obj[0], obj[1]))
    if not isinstance(obj, (list, tuple)):
        raise ValueError(f"cannot decode {type(obj).__name__} as a complex array")
    return np.array([decode_array(x) for x in obj], dtype=np.complex128)


def load_array(path):
    with open(path) as fh:
        return decode_array(json.load(fh))


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True, default=_default)


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, (complex, np.complexfloating)):
        return encode_complex(o)
    if isinstance(o, np.ndarray):
        return encode_array(o) if np.iscomplexobj(o) else o.tolist()
    raise TypeError(f"{type(o).__name__} is not JSON serializable")

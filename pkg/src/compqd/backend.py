"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
kernels.  ``COMPQD_BACKEND=python`` forces the fallback and
``COMPQD_BACKEND=cython`` makes a missing extension an error.
"""

import os

from . import _pycore

try:
    from . import _ccore
except ImportError:  # not built
    _ccore = None

ENV = "COMPQD_BACKEND"

_choice = os.environ.get(ENV, "").strip().lower()
if _choice == "python":
    core = _pycore
elif _choice == "cython":
    if _ccore is None:
        raise ImportError("COMPQD_BACKEND=cython but compqd._ccore is not built")
    core = _ccore
else:
    core = _ccore if _ccore is not None else _pycore


def available():
    names = ["python"]
    if _ccore is not None:
        names.insert(0, "cython")
    return names


def get(name=None):
    """Resolve a backend by name ("python", "cython") or the default."""
    if name is None:
        return core
    if name == "python":
        return _pycore
    if name == "cython":
        if _ccore is None:
            raise ValueError("compiled backend not available")
        return _ccore
    raise ValueError("unknown backend %r" % (name,))


def select(name):
    """Change the default backend for the rest of the process."""
    global core
    core = get(name)
    return core

"""Numba switch.

Set ``RETRIALCAP_DISABLE_NUMBA=1`` to force the pure-numpy kernels. The flag
is read once at import time.
"""

import os

_FLAG = os.environ.get("RETRIALCAP_DISABLE_NUMBA", "").strip().lower()

try:
    from numba import njit as _numba_njit
except ImportError:  # pragma: no cover - numba is a hard dependency
    _numba_njit = None

USE_NUMBA = _numba_njit is not None and _FLAG not in ("1", "true", "yes", "on")


def njit(*args, **kwargs):
    """``numba.njit`` when enabled, identity decorator otherwise."""
    if USE_NUMBA:
        return _numba_njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f

"""Numba switch.

Set ``ONEREG_DISABLE_NUMBA=1`` to run every kernel on its pure numpy path.
The flag is read once, at import time.
"""
import os

_FLAG = os.environ.get("ONEREG_DISABLE_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def njit(fn):
    """Compile ``fn`` with numba when enabled, otherwise return it untouched."""
    if USE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn


def backend_name():
    return "numba" if USE_NUMBA else "numpy"

"""Numba acceleration switch.

The hot word/permutation kernels in :mod:`nakex._kernels` are written in a
nopython-compatible numpy style so the same source runs both ways.  By default
they are compiled with ``numba.njit``; setting the environment variable
``NAKEX_NO_NUMBA=1`` (or running where numba is unavailable) selects the pure
numpy/Python fallback path.  ``nakex bench --compare`` times both paths.
"""

import os

__all__ = ["njit", "NUMBA_ENABLED"]


def _flag_disabled() -> bool:
    value = os.environ.get("NAKEX_NO_NUMBA", "").strip().lower()
    return value not in ("", "0", "false", "no")


NUMBA_ENABLED = not _flag_disabled()

if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:

    def njit(*args, **kwargs):
        """No-op stand-in for numba.njit: return the function unchanged."""
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap

"""Numba acceleration switch.

Hot kernels (codeword enumeration, code search, BP/OSD decoding) are written
twice: an ``@njit`` version and a pure-numpy fallback. The numba path is used
when numba imports cleanly and ``IONQEC_NO_NUMBA`` is unset; setting
``IONQEC_NO_NUMBA=1`` forces the fallback (used by the benchmark and by CI
environments without a working JIT).
"""

from __future__ import annotations

import os

_DISABLED = os.environ.get("IONQEC_NO_NUMBA", "").lower() in ("1", "true", "yes")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via IONQEC_NO_NUMBA instead
    numba = None
    HAVE_NUMBA = False

NUMBA_ENABLED = HAVE_NUMBA and not _DISABLED


def njit(*args, **kwargs):
    """numba.njit when enabled, identity decorator otherwise."""
    if NUMBA_ENABLED:
        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda fn: fn


def set_jobs(n: int) -> None:
    """Cap numba's thread pool (no-op on the fallback path)."""
    if NUMBA_ENABLED and n >= 1:
        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))

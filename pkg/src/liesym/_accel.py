"""Numba toggle.

Kernels come in two flavours: an ``@njit`` loop version and a vectorised
numpy version. ``LIESYM_DISABLE_NUMBA=1`` (or numba being absent) routes every
dispatcher to the numpy path.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

HAVE_NUMBA = numba is not None


def _env_disabled():
    return os.environ.get("LIESYM_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}


NUMBA_ENABLED = HAVE_NUMBA and not _env_disabled()


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    if numba is None:
        return func
    return numba.njit(cache=True)(func)


def use_numba():
    return NUMBA_ENABLED


def set_numba(enabled):
    """Switch backends at runtime; returns the previous setting."""
    global NUMBA_ENABLED
    prev = NUMBA_ENABLED
    NUMBA_ENABLED = bool(enabled) and HAVE_NUMBA
    return prev

"""Kernel backend selection.

Hot inner loops ship in two variants: an ``@njit``-compiled one and a
pure-numpy one.  Setting the environment variable ``BOXPROD_NO_NUMBA=1``
forces the numpy path; it is also selected automatically when numba is
not importable.
"""

import os

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - only hit without numba installed
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


def _env_disabled() -> bool:
    return os.environ.get("BOXPROD_NO_NUMBA", "").strip() not in ("", "0")


USE_NUMBA = HAS_NUMBA and not _env_disabled()


def active_backend() -> str:
    """Name of the backend the package-level kernels will use."""
    return "numba" if USE_NUMBA else "numpy"

"""Backend selection for the hot kernels.

The kernels in :mod:`sgcoherent._kernels` exist in two flavours: loops
compiled with numba ``@njit`` and a pure-numpy path.  The numba path is used
when numba imports cleanly and ``SGCOHERENT_BACKEND`` is not set to
``numpy``.  ``SGCOHERENT_THREADS`` caps the numba thread pool.
"""

import os

try:
    import numba

    HAVE_NUMBA = True
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # the system TBB is too old for numba and only produces a warning
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False

BACKENDS = ("numba", "numpy")


def _initial_backend():
    requested = os.environ.get("SGCOHERENT_BACKEND", "").strip().lower()
    if requested == "numpy" or not HAVE_NUMBA:
        return "numpy"
    if requested not in ("", "numba"):
        raise ValueError(f"SGCOHERENT_BACKEND must be one of {BACKENDS}, got {requested!r}")
    return "numba"


_backend = _initial_backend()


def get_backend():
    return _backend


def set_backend(name):
    """Switch kernels between ``"numba"`` and ``"numpy"``; returns the previous name."""
    global _backend
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    previous, _backend = _backend, name
    return previous


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise the identity decorator."""
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


def configure_threads():
    threads = os.environ.get("SGCOHERENT_THREADS")
    if not threads or not HAVE_NUMBA:
        return
    n = max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)


configure_threads()

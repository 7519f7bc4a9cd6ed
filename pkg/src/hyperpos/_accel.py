"""Selects the numba backend or the pure-numpy fallback.

Set ``HYPERPOS_JIT=0`` before import to run the numpy kernels instead of the
compiled ones.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("HYPERPOS_JIT", "1").strip().lower() not in ("0", "false", "no", "off")


if USE_NUMBA and "NUMBA_THREADING_LAYER" not in os.environ:
    # skip TBB: old system builds only emit a warning and fall through anyway
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


def njit(*args, **kwargs):
    """``numba.njit`` when the compiled backend is selected, otherwise a no-op decorator."""
    if USE_NUMBA:
        return numba.njit(*args, cache=True, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda f: f


if HAVE_NUMBA:
    prange = numba.prange
else:  # pragma: no cover
    prange = range

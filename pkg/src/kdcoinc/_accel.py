"""Backend selection for the hot kernels.

Set ``KDCOINC_DISABLE_NUMBA=1`` to force the pure-numpy fallback. When numba
is not importable the fallback is used as well.
"""
import os

_DISABLE = os.environ.get("KDCOINC_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    import numba
    from numba import njit, prange
    HAS_NUMBA = True
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # avoid probing an outdated TBB install on first parallel launch
        numba.config.THREADING_LAYER = "omp"
except ImportError:  # pragma: no cover
    numba = None
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f

    prange = range

USE_NUMBA = HAS_NUMBA and not _DISABLE
BACKEND = "numba" if USE_NUMBA else "numpy"


def set_threads(n):
    """Bound the worker fan-out of the parallel kernels (``None`` = all cores)."""
    if not USE_NUMBA:
        return
    if n is None:
        n = numba.config.NUMBA_NUM_THREADS
    numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))

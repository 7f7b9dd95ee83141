# Use Numba if available and not disabled. Otherwise fall back to the
# interpreted kernels.
#
# Set NATDUAL_NUMBA=0 to force the fallback path (e.g. for debugging or
# for the comparison benchmark).

import logging
import os

logger = logging.getLogger(__name__)

_flag = os.environ.get("NATDUAL_NUMBA", "1").strip().lower()
_requested = _flag not in ("0", "false", "no", "off")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _requested

if _requested and not HAVE_NUMBA:  # pragma: no cover
    logger.warning("numba not importable; using interpreted kernels")


def njit(func):
    """Compile `func` with numba when available, else return it untouched."""
    if HAVE_NUMBA:
        return numba.njit(cache=True)(func)
    return func


def backend() -> str:
    return "numba" if USE_NUMBA else "python"

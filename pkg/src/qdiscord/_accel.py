"""Backend selection for the compiled kernels.

Numba is used when it imports cleanly, unless ``QDISCORD_DISABLE_NUMBA`` is set
to a truthy value, in which case the pure-numpy kernels are used.
"""
import os

_FALSY = {"", "0", "false", "no", "off"}

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

DISABLED = os.environ.get("QDISCORD_DISABLE_NUMBA", "0").strip().lower() not in _FALSY
USE_NUMBA = HAS_NUMBA and not DISABLED
BACKEND = "numba" if USE_NUMBA else "numpy"

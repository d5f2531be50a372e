"""Numba switch.

Set ``NCSELFTEST_NO_NUMBA=1`` to force the pure-numpy kernels even when
numba is importable.  ``njit`` degrades to an identity decorator in that
case so the loop-form kernels stay callable (slowly) for cross-checks.
"""
import os

_DISABLED = os.environ.get("NCSELFTEST_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    import numba as _numba

    HAS_NUMBA = True
except ImportError:
    _numba = None
    HAS_NUMBA = False


def njit(*args, **kwargs):
    if HAS_NUMBA:
        return _numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


def backend_name():
    return "numba" if HAS_NUMBA else "numpy"

"""JIT shim.

Kernels are written in the numba-compatible subset of Python. When numba is
importable and ``SATPHASE_DISABLE_NUMBA`` is unset, they are compiled with
``numba.njit``; otherwise they run as plain Python over numpy arrays. Both
paths execute the same source, so results are identical.
"""
import contextlib
import os

_FLAG = os.environ.get("SATPHASE_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by SATPHASE_DISABLE_NUMBA")
    import numba
except ImportError:
    numba = None

NUMBA_ENABLED = numba is not None


if NUMBA_ENABLED:
    objmode = numba.objmode

    def njit(*args, **kwargs):
        kwargs.setdefault("cache", True)
        if args and callable(args[0]):
            return numba.njit(**kwargs)(args[0])
        return numba.njit(*args, **kwargs)

else:

    def objmode(**_types):
        return contextlib.nullcontext()

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn


def backend() -> str:
    return "numba" if NUMBA_ENABLED else "python"

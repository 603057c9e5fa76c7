"""Kernel backend selection.

Hot enumeration loops have two implementations: numba @njit kernels and a
pure numpy/python fallback.  SIEGELLIFT_BACKEND=numpy forces the fallback;
SIEGELLIFT_BACKEND=numba requires numba.  Default: numba when importable.
Results are identical either way; only speed differs.
"""

import os

_requested = os.environ.get("SIEGELLIFT_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise RuntimeError(f"SIEGELLIFT_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

USING_NUMBA = False
if _requested != "numpy":
    try:
        import numba  # noqa: F401
        USING_NUMBA = True
    except ImportError:
        if _requested == "numba":
            raise
        USING_NUMBA = False


def backend_name():
    return "numba" if USING_NUMBA else "numpy"


def default_threads():
    env = os.environ.get("SIEGELLIFT_THREADS", "").strip()
    if env:
        n = int(env)
        if n < 1:
            raise RuntimeError("SIEGELLIFT_THREADS must be >= 1")
        return n
    return 1

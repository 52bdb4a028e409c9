"""Kernel backend selection.

``KGDECOMP_BACKEND=numpy`` forces the pure-numpy kernels; anything else (or
unset) uses numba when it can be imported.
"""

import os


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def requested_backend() -> str:
    want = os.environ.get("KGDECOMP_BACKEND", "numba").strip().lower()
    if want not in ("numba", "numpy"):
        raise ValueError(f"KGDECOMP_BACKEND must be 'numba' or 'numpy', got {want!r}")
    if want == "numba" and not _numba_available():
        return "numpy"
    return want


BACKEND = requested_backend()

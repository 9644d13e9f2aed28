"""Kernel compilation switch.

Hot loops are written once in numba-compatible Python.  When numba is
importable and ``LDD_NUMBA`` is not set to ``0``, they are compiled with
``numba.njit``; otherwise the very same source runs under the interpreter,
which is slow but produces bit-identical results.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and os.environ.get("LDD_NUMBA", "1") != "0"


def kernel(func):
    """Compile ``func`` with numba when enabled, else return it unchanged."""
    if USE_NUMBA:
        return numba.njit(cache=True, nogil=True)(func)
    return func


def backend_name():
    return "numba" if USE_NUMBA else "python"

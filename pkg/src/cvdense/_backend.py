"""Kernel backend selection.

The hot sampling kernels ship in two implementations: a numba @njit loop and
a vectorized pure-numpy fallback.  The environment variable CVDENSE_BACKEND
("numba" or "numpy") picks one; unset, numba is used when importable.
"""
from __future__ import annotations

import os
import warnings

ENV_VAR = "CVDENSE_BACKEND"

try:
    import numba  # noqa: F401
    _HAVE_NUMBA = True
except ImportError:
    _HAVE_NUMBA = False


def available_backends():
    return ("numba", "numpy") if _HAVE_NUMBA else ("numpy",)


def _resolve_default() -> str:
    choice = os.environ.get(ENV_VAR, "").strip().lower()
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if not _HAVE_NUMBA:
            raise ImportError(f"{ENV_VAR}=numba requested but numba is not installed")
        return "numba"
    if choice:
        warnings.warn(f"ignoring unknown {ENV_VAR}={choice!r}; valid values are numba, numpy")
    return "numba" if _HAVE_NUMBA else "numpy"


_ACTIVE = _resolve_default()


def get_backend() -> str:
    return _ACTIVE


def set_backend(name: str) -> None:
    """Switch the process-wide kernel backend (mainly for tests and benchmarks)."""
    global _ACTIVE
    if name not in available_backends():
        raise ValueError(f"backend {name!r} not available; choose from {available_backends()}")
    _ACTIVE = name

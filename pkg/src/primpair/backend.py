"""Kernel backend selection.

The table builds, character-sum loops and quartic polynomial searches
dominate runtime.  Each exists twice with identical signatures and
bit-identical results: a numba @njit version and a vectorized numpy
version.  Selection order: explicit set_backend() call, then the
PRIMPAIR_BACKEND environment variable ("numba" or "numpy"), then numba
if it imports, else numpy.
"""

from __future__ import annotations

import importlib
import os

_OVERRIDE: str | None = None
_RESOLVED: str | None = None


def _resolve() -> str:
    if _OVERRIDE is not None:
        return _OVERRIDE
    choice = os.environ.get("PRIMPAIR_BACKEND", "").strip().lower()
    if choice and choice not in ("numba", "numpy"):
        raise ValueError(f"PRIMPAIR_BACKEND must be 'numba' or 'numpy', got {choice!r}")
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        importlib.import_module("numba")
        return "numba"
    try:
        importlib.import_module("numba")
        return "numba"
    except ImportError:
        return "numpy"


def active_backend() -> str:
    """Name of the backend in use: 'numba' or 'numpy'."""
    global _RESOLVED
    if _RESOLVED is None:
        _RESOLVED = _resolve()
    return _RESOLVED


def set_backend(name: str | None) -> None:
    """Force a backend (None restores automatic selection)."""
    global _OVERRIDE, _RESOLVED
    if name is not None and name not in ("numba", "numpy"):
        raise ValueError(f"backend must be 'numba' or 'numpy', got {name!r}")
    _OVERRIDE = name
    _RESOLVED = None


def kernels():
    """The active kernel module."""
    if active_backend() == "numba":
        from primpair import _kernels_numba as mod
    else:
        from primpair import _kernels_numpy as mod
    return mod

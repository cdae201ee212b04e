"""Kernel backend selection.

The hot loops (gate application, energy tables, Pauli reductions) exist in two
interchangeable flavours: a numba @njit module and a pure-numpy fallback.
Which one runs is decided here:

  * ``VQELAB_BACKEND=numba`` or ``=numpy`` in the environment forces a choice
    (asking for numba when it is not importable is an error),
  * unset: numba when importable, numpy otherwise,
  * :func:`set_backend` / :func:`use_backend` override at runtime, which is
    what the tests and the kernel benchmark use.

Both backends produce results equal to within float64 roundoff; each one is
individually deterministic (serial loops on one side, fixed numpy reduction
order on the other).
"""

from __future__ import annotations

import importlib.util
import os
from contextlib import contextmanager

ENV_VAR = "VQELAB_BACKEND"

_active: str | None = None


def numba_available() -> bool:
    return importlib.util.find_spec("numba") is not None


def available_backends() -> tuple[str, ...]:
    return ("numba", "numpy") if numba_available() else ("numpy",)


def _resolve_initial() -> str:
    choice = os.environ.get(ENV_VAR, "").strip().lower()
    if choice:
        return _validated(choice)
    return "numba" if numba_available() else "numpy"


def _validated(name: str) -> str:
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}, expected 'numba' or 'numpy'")
    if name == "numba" and not numba_available():
        raise ImportError("backend 'numba' requested but numba is not installed")
    return name


def active_backend() -> str:
    """Name of the backend currently in effect ('numba' or 'numpy')."""
    global _active
    if _active is None:
        _active = _resolve_initial()
    return _active


def set_backend(name: str) -> None:
    global _active
    _active = _validated(name.strip().lower())


@contextmanager
def use_backend(name: str):
    """Temporarily switch backends (restores the previous one on exit)."""
    global _active
    previous = active_backend()
    set_backend(name)
    try:
        yield
    finally:
        _active = previous


def kernels():
    """Return the kernel module for the active backend."""
    if active_backend() == "numba":
        from . import _kernels_numba as mod
    else:
        from . import _kernels_numpy as mod
    return mod

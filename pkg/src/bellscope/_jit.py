"""Optional numba compilation for the hot kernels.

Set ``BELLSCOPE_DISABLE_JIT=1`` to run every kernel as plain Python/numpy.
Both paths execute the same source, so results agree to rounding.
"""

from __future__ import annotations

import os

__all__ = ["jit", "JIT_ENABLED"]


def _flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in {"1", "true", "yes", "on"}


JIT_ENABLED = False

if not _flag("BELLSCOPE_DISABLE_JIT"):
    try:
        import numba

        JIT_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass


def jit(func):
    """``numba.njit(cache=True)`` when enabled, identity otherwise."""
    if JIT_ENABLED:
        return numba.njit(cache=True)(func)
    return func

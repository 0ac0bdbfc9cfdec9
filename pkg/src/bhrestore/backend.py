"""Kernel backend selection.

The compiled Cython kernels are preferred when the extension built; the
pure-NumPy reference kernels are the fallback.  Set ``BHRESTORE_BACKEND``
to ``python`` or ``compiled`` to force one (``auto`` is the default).
Both backends implement identical per-pixel arithmetic, so a fixed input
yields the same result whichever is active.
"""

from __future__ import annotations

import os

from . import _kernels_np

BACKEND_ENV = "BHRESTORE_BACKEND"


def _load():
    choice = os.environ.get(BACKEND_ENV, "auto").lower()
    if choice not in ("auto", "compiled", "python"):
        raise ValueError(
            f"{BACKEND_ENV} must be 'auto', 'compiled' or 'python', got {choice!r}"
        )
    if choice == "python":
        return _kernels_np, "python"
    try:
        from . import _kernels_cy
    except ImportError:
        if choice == "compiled":
            raise
        return _kernels_np, "python"
    return _kernels_cy, "compiled"


kernels, BACKEND_NAME = _load()

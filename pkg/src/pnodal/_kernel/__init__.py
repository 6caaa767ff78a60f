"""Kernel selection: compiled extension if available, pure Python otherwise.

Set PNODAL_PURE_PY=1 to force the pure-Python kernels (used by the
benchmark and for debugging); otherwise the Cython extension is used
whenever it imported cleanly.
"""

from __future__ import annotations

import os

if os.environ.get("PNODAL_PURE_PY"):
    from . import _phase_py as _impl

    IMPL = "python"
else:
    try:
        from . import _phase_cy as _impl  # type: ignore[attr-defined]

        IMPL = "cython"
    except ImportError:
        from . import _phase_py as _impl

        IMPL = "python"

OK = 0
NONPOSITIVE_RHS = 1
TARGET_NOT_REACHED = 2

integrate_phase_kernel = _impl.integrate_phase_kernel
advance_to_phase_kernel = _impl.advance_to_phase_kernel

__all__ = [
    "IMPL",
    "OK",
    "NONPOSITIVE_RHS",
    "TARGET_NOT_REACHED",
    "integrate_phase_kernel",
    "advance_to_phase_kernel",
]

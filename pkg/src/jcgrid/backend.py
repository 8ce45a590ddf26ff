"""Kernel backend selection.

The compiled extension is used when importable; set ``JCGRID_PURE=1`` to force
the pure-Python fallback (used by the benchmark and the backend-parity tests).
"""

import os

if os.environ.get("JCGRID_PURE"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels_cy as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels

BACKEND = kernels.BACKEND

"""Kernel backend selection: compiled extension when available, numpy
fallback otherwise.  DETFORGE_PURE_PYTHON=1 forces the fallback."""

import os

from . import _kernels_py

if os.environ.get("DETFORGE_PURE_PYTHON", "") not in ("", "0"):
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        kernels = _kernels_py

HAVE_COMPILED = bool(getattr(kernels, "COMPILED", False))

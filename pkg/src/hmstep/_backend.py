"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; the
pure-Python kernels are the fallback.  Set ``HMSTEP_BACKEND=python`` to
force the fallback (used by the benchmark and the agreement tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("HMSTEP_BACKEND", "").lower() == "python":
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py

BACKEND = kernels.BACKEND

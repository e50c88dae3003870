"""Pick the compiled raster kernels when available.

Set ``CONTINUA_PURE=1`` to force the numpy reference kernels.
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("CONTINUA_PURE") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"
mark_segments = _impl.mark_segments
bfs_distances = _impl.bfs_distances
label = _impl.label

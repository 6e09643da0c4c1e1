"""Simulation kernels with a compiled fast path.

Importing this package picks the compiled extension when it is
available and falls back to the pure-Python reference otherwise; both
produce bit-identical results. Set ``MMWLINK_PURE_PYTHON=1`` to force
the fallback, e.g. for benchmarking or debugging.
"""

from __future__ import annotations

import os

from . import _py

if os.environ.get("MMWLINK_PURE_PYTHON"):
    _impl = _py
    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:
        _impl = _py
        BACKEND = "python"

chain_walk = _impl.chain_walk
serve_frames = _impl.serve_frames

__all__ = ["BACKEND", "chain_walk", "serve_frames"]

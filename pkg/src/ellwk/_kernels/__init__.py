"""Hot kernels with a compiled core and a pure-Python fallback.

The compiled module ``_core`` is built from ``_core.pyx`` when Cython and a C
compiler are available at install time.  Set ``ELLWK_PURE_PYTHON=1`` to force
the fallback.
"""

from __future__ import annotations

import os

from . import _fallback

BACKEND = "python"
bfs_ball = _fallback.bfs_ball

if not os.environ.get("ELLWK_PURE_PYTHON"):
    try:
        from . import _core  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _core = None
    else:
        BACKEND = "cython"
        bfs_ball = _core.bfs_ball

__all__ = ["BACKEND", "bfs_ball"]

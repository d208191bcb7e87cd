"""Runtime knobs read from the environment."""

from __future__ import annotations

import os


def thread_count() -> int:
    """Worker cap from ELLWK_THREADS (default 1; invalid values fall back to 1)."""
    try:
        return max(1, int(os.environ.get("ELLWK_THREADS", "1")))
    except ValueError:
        return 1

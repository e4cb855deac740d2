"""Runtime knobs read from the environment."""

from __future__ import annotations

import os


def thread_degree() -> int:
    """Parallelism degree for pairwise checks, from ENDATLAS_THREADS (>= 1)."""
    try:
        return max(1, int(os.environ.get("ENDATLAS_THREADS", "1")))
    except ValueError:
        return 1

"""Worker-thread helper honouring the CENTER_KIT_THREADS cap."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

__all__ = ["worker_count", "parallel_map"]


def worker_count() -> int:
    """Worker cap from CENTER_KIT_THREADS (default 1: deterministic serial)."""
    raw = os.environ.get("CENTER_KIT_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def parallel_map(fn, items):
    """Map preserving order; uses a thread pool only when a cap > 1 is set."""
    items = list(items)
    n = worker_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))

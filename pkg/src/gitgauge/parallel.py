"""Optional process-level parallelism for the per-support loops.

``GITGAUGE_THREADS`` caps the worker count; unset or 1 runs serially. Results
always come back in input order, so callers stay deterministic.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def worker_count() -> int:
    raw = os.environ.get("GITGAUGE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"GITGAUGE_THREADS must be an integer, got {raw!r}") from None
    return max(1, min(n, os.cpu_count() or 1))


def pmap(fn, items, workers=None):
    """Ordered ``map``; ``workers`` overrides the environment setting."""
    items = list(items)
    workers = worker_count() if workers is None else max(1, int(workers))
    if workers == 1 or len(items) < 2 * workers:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))

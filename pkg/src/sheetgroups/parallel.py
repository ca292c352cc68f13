"""Order-preserving process-pool map."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def default_jobs() -> int:
    return os.cpu_count() or 1


def pmap(fn, items, jobs: int = 1, chunksize: int | None = None) -> list:
    """``list(map(fn, items))``, fanned out over ``jobs`` processes.

    Results come back in input order whatever the completion order.
    """
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    if chunksize is None:
        chunksize = max(1, len(items) // (jobs * 4))
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as ex:
        return list(ex.map(fn, items, chunksize=chunksize))

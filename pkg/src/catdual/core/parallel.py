"""Worker-pool helpers honouring the CATDUAL_THREADS cap."""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "CATDUAL_THREADS"


def worker_count() -> int:
    """Number of workers allowed by CATDUAL_THREADS (default 1)."""
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        logger.warning(f"⚠️ ignoring non-integer {THREADS_ENV}={raw!r}")
        return 1
    return max(1, n)


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """Map ``fn`` over ``items`` preserving order; serial when one worker."""
    items = list(items)
    workers = min(worker_count(), max(1, len(items)))
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))

"""Ordered thread-pool map for independent per-direction work."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "ECTKIT_NUM_THREADS"


def worker_count(workers: int | None = None) -> int:
    if workers is None:
        raw = os.environ.get(THREADS_ENV, "").strip()
        if raw:
            try:
                workers = int(raw)
            except ValueError:
                raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
        else:
            workers = min(8, os.cpu_count() or 1)
    if workers < 1:
        raise ValueError(f"worker count must be positive, got {workers}")
    return workers


def map_ordered(fn: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    """``[fn(x) for x in items]``, possibly computed on several threads.

    Results are returned in input order, so reductions over them do not
    depend on scheduling.
    """
    items = list(items)
    n = worker_count(workers)
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))

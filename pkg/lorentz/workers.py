from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

from . import config

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
    """Map `fn` over `items` in input order, using up to LORENTZ_THREADS workers."""
    threads = config.LORENTZ_THREADS
    if threads <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))

import os
from concurrent.futures import ThreadPoolExecutor
from logging import getLogger
from typing import Callable, Iterable, List, TypeVar

logger = getLogger(__name__)

THREADS_ENV = "STEENROD_DESK_THREADS"

T = TypeVar("T")
R = TypeVar("R")


def num_threads() -> int:
    value = os.environ.get(THREADS_ENV, "1")
    try:
        threads = int(value)
    except ValueError:
        logger.warning(f"ignore {THREADS_ENV}={value!r}: not an integer")
        return 1
    return max(threads, 1)


def map_degrees(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """``[fn(x) for x in items]``, spread over worker threads when
    ``STEENROD_DESK_THREADS`` > 1. Results keep the input order."""
    items = list(items)
    threads = num_threads()
    if threads == 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(fn, items))

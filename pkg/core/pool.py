from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, TypeVar

from . import config

T = TypeVar("T")
R = TypeVar("R")


def cell_map(fn: Callable[[T], R], items: Iterable[T]) -> Iterator[R]:
    """Ordered map over independent cells, threaded when TWISTKIT_THREADS > 1."""
    if config.THREADS <= 1:
        yield from map(fn, items)
        return
    with ThreadPoolExecutor(max_workers=config.THREADS) as ex:
        yield from ex.map(fn, items)

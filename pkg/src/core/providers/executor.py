"""Executor providers."""
import logging
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from ..config import settings
from ..interfaces.executor import IGridExecutor

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class SerialExecutor(IGridExecutor):
    """Reference single-threaded executor."""

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        return [fn(item) for item in items]

    @property
    def workers(self) -> int:
        return 1


class ThreadedExecutor(IGridExecutor):
    """Thread pool executor with order-preserving results."""

    def __init__(self, max_workers: int):
        if max_workers < 1:
            raise ValueError("max_workers must be positive")
        self._max_workers = max_workers

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        with ThreadPoolExecutor(max_workers=self._max_workers) as pool:
            return list(pool.map(fn, items))

    @property
    def workers(self) -> int:
        return self._max_workers


def get_executor(threads: int | None = None) -> IGridExecutor:
    """Get executor instance for the requested thread count."""
    threads = settings.THREADS if threads is None else threads
    if threads <= 1:
        return SerialExecutor()
    logger.info(f"Using {threads} worker threads")
    return ThreadedExecutor(threads)

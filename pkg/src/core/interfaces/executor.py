"""Executor interfaces."""
from abc import ABC, abstractmethod
from collections.abc import Callable, Iterable
from typing import TypeVar

T = TypeVar("T")
R = TypeVar("R")


class IGridExecutor(ABC):
    """Interface for evaluating independent grid chunks."""

    @abstractmethod
    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        """Apply fn to every item and return the results in input order."""
        pass

    @property
    @abstractmethod
    def workers(self) -> int:
        """Number of concurrent workers."""
        pass

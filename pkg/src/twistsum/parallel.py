"""Order-preserving parallel map used by the enumeration and sampling code."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def pmap(fn: Callable[[T], R], tasks: Sequence[T], workers: int = 1) -> list[R]:
    """``[fn(t) for t in tasks]``, fanned out over ``workers`` processes.

    Results come back in task order, so callers that merge them get the same
    answer for any worker count.
    """
    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as ex:
        return list(ex.map(fn, tasks))

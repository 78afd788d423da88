# fracspec/utils/parallel.py

from typing import Callable, Iterable, TypeVar

from joblib import Parallel, delayed

from .config import settings

T = TypeVar("T")
R = TypeVar("R")


def worker_count() -> int:
    """Number of joblib workers; FRACSPEC_THREADS caps it, 0 means all cores."""
    return settings.THREADS if settings.THREADS > 0 else -1


def ordered_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """
    Apply `fn` to every item on a thread pool and return results in input order.

    Each call must own its state; numpy releases the GIL in the dense kernels,
    so threads are enough.
    """
    items = list(items)
    if len(items) <= 1 or settings.THREADS == 1:
        return [fn(item) for item in items]
    return Parallel(n_jobs=worker_count(), prefer="threads")(
        delayed(fn)(item) for item in items
    )

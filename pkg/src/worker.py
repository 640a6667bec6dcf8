"""
Shard pool for exhaustive enumeration

Contiguous sub-ranges of an enumeration are evaluated on a gevent thread
pool. Results are returned in shard order, so callers merge them (min, sum)
deterministically and get the same answer for every job count.
"""
import logging
from typing import Callable, List, Sequence, Tuple, TypeVar

from gevent.threadpool import ThreadPool

from src.config import config
from src.helper.exceptions import ParameterError

logger = logging.getLogger(__name__)

S = TypeVar("S")
R = TypeVar("R")


def split_range(start: int, stop: int, parts: int) -> List[Tuple[int, int]]:
    """Split [start, stop) into at most `parts` contiguous, non-empty pieces"""
    if parts < 1:
        raise ParameterError(f"parts must be >= 1, got {parts}")
    total = stop - start
    if total <= 0:
        return []
    parts = min(parts, total)
    size, extra = divmod(total, parts)
    shards = []
    lo = start
    for i in range(parts):
        hi = lo + size + (1 if i < extra else 0)
        shards.append((lo, hi))
        lo = hi
    return shards


class ShardPool:
    """
    Runs one function over a list of shards

    Args:
        jobs: number of worker threads (defaults to config.jobs)
    """

    def __init__(self, jobs: int = None):
        self.jobs = config.jobs if jobs is None else jobs
        if self.jobs < 1:
            raise ParameterError(f"jobs must be >= 1, got {self.jobs}")

    def map(self, fn: Callable[[S], R], shards: Sequence[S]) -> List[R]:
        if self.jobs == 1 or len(shards) <= 1:
            return [fn(shard) for shard in shards]

        size = min(self.jobs, len(shards))
        logger.debug(f"Dispatching {len(shards)} shards to {size} threads")
        pool = ThreadPool(size)
        try:
            return list(pool.map(fn, shards))
        finally:
            pool.kill()

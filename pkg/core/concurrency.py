"""Bounded asyncio worker pool for CPU-bound numpy jobs.

Jobs run in threads via asyncio.to_thread (numpy releases the GIL inside
FFTs); a semaphore caps how many are in flight. Results always come back
in submission order, whatever order the jobs finish in.
"""

from __future__ import annotations

import asyncio
import logging
from typing import Callable, Iterable, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class WorkLimiter:
    """Async-safe concurrency gate.

    Args:
        max_concurrent: Maximum jobs running at once.
    """

    def __init__(self, max_concurrent: int = 4):
        if max_concurrent < 1:
            raise ValueError(f"max_concurrent must be at least 1, got {max_concurrent}")
        self._semaphore = asyncio.Semaphore(max_concurrent)
        self.max_concurrent = max_concurrent

    async def acquire(self) -> None:
        await self._semaphore.acquire()

    def release(self) -> None:
        self._semaphore.release()

    async def __aenter__(self):
        await self.acquire()
        return self

    async def __aexit__(self, *exc):
        self.release()

    async def run(self, fn: Callable[..., R], *args) -> R:
        """Run fn(*args) in a worker thread once a slot is free."""
        async with self:
            return await asyncio.to_thread(fn, *args)


async def map_in_order(
    fn: Callable[[T], R],
    items: Iterable[T],
    max_concurrent: int = 4,
    progress_callback=None,
) -> list[R]:
    """Apply fn to every item concurrently; results match the input order.

    The first exception raised by any job propagates after the others
    are cancelled.
    """
    limiter = WorkLimiter(max_concurrent)
    items = list(items)
    done = 0

    async def _job(index: int, item: T) -> R:
        nonlocal done
        result = await limiter.run(fn, item)
        done += 1
        logger.debug("job %d finished (%d/%d)", index, done, len(items))
        if progress_callback:
            progress_callback(done, len(items))
        return result

    tasks = [asyncio.create_task(_job(i, item)) for i, item in enumerate(items)]
    try:
        return list(await asyncio.gather(*tasks))
    except BaseException:
        for task in tasks:
            task.cancel()
        raise

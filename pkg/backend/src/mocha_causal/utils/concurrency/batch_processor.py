"""Provides ordered, thread-pooled batch processing."""

import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

logger = logging.getLogger(__name__)
T = TypeVar("T")
R = TypeVar("R")


class BatchProcessor:
    """Applies an operation to many items, returning results in input order."""

    @staticmethod
    def process_ordered(
        items: Sequence[T],
        operation: Callable[[T], R],
        max_workers: int = 1,
        batch_size: int | None = None,
    ) -> list[R]:
        """
        Apply ``operation`` to every item.

        Results always follow the order of ``items`` regardless of completion
        order, so any reduction over them is deterministic. The first exception
        raised by an operation propagates to the caller.

        Args:
            items: Items to process
            operation: Function applied to each item
            max_workers: Thread count; 1 runs sequentially in the caller's thread
            batch_size: Number of items submitted at once (default: all)

        Returns:
            List of results, one per item
        """
        if max_workers <= 1 or len(items) <= 1:
            return [operation(item) for item in items]

        batch_size = batch_size or len(items)
        results: list[R] = []
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            for start in range(0, len(items), batch_size):
                batch = items[start : start + batch_size]
                try:
                    results.extend(executor.map(operation, batch))
                except Exception as e:
                    logger.error(f"Batch operation error: {e}")
                    raise
        logger.debug(f"Processed {len(results)} items with {max_workers} workers")
        return results

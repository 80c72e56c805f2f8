"""Batch processing for partitionable exact computations.

Work such as the Shao–Wei sum over all 0-1 matrices, or the ray-pairing
step of the double description method, splits into independent chunks.
``BatchProcessor`` runs those chunks on a thread pool and hands results back
in input order, so the partition never changes the final answer.
"""

import concurrent.futures
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, TypeVar

from .logging_config import get_logger

logger = get_logger(__name__)

DEFAULT_BATCH_SIZE = 4096
DEFAULT_MAX_WORKERS = 4

T = TypeVar("T")
R = TypeVar("R")


def chunk_range(start: int, stop: int, size: int) -> Iterator[range]:
    """Split ``range(start, stop)`` into consecutive ranges of at most ``size`` items."""
    for lo in range(start, stop, size):
        yield range(lo, min(lo + size, stop))


def chunk_sequence(items: Sequence[T], size: int) -> Iterator[Sequence[T]]:
    """Split a sequence into consecutive slices of at most ``size`` items."""
    for lo in range(0, len(items), size):
        yield items[lo : lo + size]


class BatchProcessor:
    """Runs chunked work on a thread pool, preserving chunk order."""

    def __init__(
        self,
        batch_size: int = DEFAULT_BATCH_SIZE,
        max_workers: int = DEFAULT_MAX_WORKERS,
        progress_callback: Optional[Callable[[int, int], None]] = None,
    ):
        """Initialize the batch processor.

        Args:
            batch_size: Number of items per chunk
            max_workers: Maximum number of parallel workers; 1 runs inline
            progress_callback: Optional callback receiving (chunks done, chunks total)
        """
        if batch_size < 1:
            raise ValueError("batch_size must be at least 1")
        if max_workers < 1:
            raise ValueError("max_workers must be at least 1")
        self.batch_size = batch_size
        self.max_workers = max_workers
        self.progress_callback = progress_callback

    def map_chunks(self, chunks: Iterable[T], process_func: Callable[[T], R]) -> List[R]:
        """Apply ``process_func`` to every chunk.

        Args:
            chunks: Chunks of work
            process_func: Function to process one chunk

        Returns:
            Results in the same order as ``chunks``. The first exception raised
            by any chunk propagates to the caller.
        """
        chunk_list = list(chunks)
        total = len(chunk_list)
        logger.debug(
            "Starting batch processing",
            extra={"total_chunks": total, "batch_size": self.batch_size, "max_workers": self.max_workers},
        )

        results: List[R] = []
        if self.max_workers == 1 or total <= 1:
            for done, chunk in enumerate(chunk_list, 1):
                results.append(process_func(chunk))
                if self.progress_callback:
                    self.progress_callback(done, total)
        else:
            with concurrent.futures.ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                for done, result in enumerate(executor.map(process_func, chunk_list), 1):
                    results.append(result)
                    if self.progress_callback:
                        self.progress_callback(done, total)

        logger.debug("Completed batch processing", extra={"total_chunks": total})
        return results

    def sum_range(self, start: int, stop: int, term_sum: Callable[[range], int]) -> int:
        """Partition ``range(start, stop)`` and add up the partial sums.

        Args:
            start: First index
            stop: One past the last index
            term_sum: Function returning the exact sum over one sub-range

        Returns:
            The exact total
        """
        return sum(self.map_chunks(chunk_range(start, stop, self.batch_size), term_sum))

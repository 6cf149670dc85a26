"""Deterministic worker partitioning.

Enumeration kernels split their search space into ordered partitions; the
partitions may be processed by any number of workers, and results are merged
in partition order, so output never depends on the worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor


def map_partitions(fn, partitions, workers: int = 1) -> list:
    """Apply fn to each partition, preserving partition order in the result."""
    if workers <= 1 or len(partitions) <= 1:
        return [fn(p) for p in partitions]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, partitions))

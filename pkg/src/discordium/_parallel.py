"""Internal helpers for bounded, deterministic task fan-out.

The DISCORDIUM_THREADS environment variable caps how many workers the
verification batteries may use (default cap: hardware concurrency).
Battery trials are seconds-long and independent, so they fan out across
processes; optimizer restarts are dominated by small-matrix numpy calls
that CPython threads only slow down, so they stay serial.  Results are
always merged by task index, making the outcome schedule-independent.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")


def worker_cap() -> int:
    raw = os.environ.get("DISCORDIUM_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"DISCORDIUM_THREADS must be an integer, got {raw!r}")
    return max(1, n)


def run_indexed(fn: Callable[[int], T], n: int) -> list[T]:
    """Evaluate fn(0..n-1) serially, returning results in order."""
    return [fn(i) for i in range(n)]


def process_map(fn: Callable[..., T], argument_tuples: Sequence[tuple]) -> list[T]:
    """Map a picklable function over argument tuples, in parallel when the
    worker cap allows, preserving argument order in the results."""
    workers = min(worker_cap(), len(argument_tuples))
    if workers <= 1 or len(argument_tuples) <= 1:
        return [fn(*args) for args in argument_tuples]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*argument_tuples)))

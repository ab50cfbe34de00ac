"""Linear-time selection: randomized quickselect that falls back to
median-of-medians pivots when the recursion runs too deep.

Keys are assumed pairwise distinct; the tree builders guarantee this by
keying on ``(coordinate, id)``.
"""

from __future__ import annotations

import math
import random
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")

_pivot_rng = random.Random(0x5EED)


def _median_of_medians(keys: Sequence) -> object:
    """Pivot key guaranteed to sit between the 30th and 70th percentile."""
    if len(keys) <= 5:
        return sorted(keys)[(len(keys) - 1) // 2]
    medians = [sorted(keys[i:i + 5])[(len(keys[i:i + 5]) - 1) // 2]
               for i in range(0, len(keys), 5)]
    return _select_key(medians, (len(medians) - 1) // 2, deterministic=True)


def _select_key(keys: list, rank: int, deterministic: bool = False) -> object:
    # Returns the key of 0-based ``rank``; works on a private copy.
    budget = 0 if deterministic else 2 * max(1, math.ceil(math.log2(max(len(keys), 2))))
    while True:
        if len(keys) <= 5:
            return sorted(keys)[rank]
        if budget > 0:
            pivot = keys[_pivot_rng.randrange(len(keys))]
            budget -= 1
        else:
            pivot = _median_of_medians(keys)
        lo = [x for x in keys if x < pivot]
        if rank < len(lo):
            keys = lo
            continue
        if rank == len(lo):
            return pivot
        keys = [x for x in keys if x > pivot]
        rank -= len(lo) + 1


def select(items: Sequence[T], rank: int, key: Callable[[T], object]) -> tuple[T, list[T], list[T]]:
    """Find the item of 0-based ``rank`` under ``key``.

    Returns ``(item, before, after)`` where ``before`` holds the ``rank``
    smaller items and ``after`` the rest, each in input order. Expected time
    is linear; the median-of-medians fallback bounds the worst case.
    """
    n = len(items)
    if not 0 <= rank < n:
        raise IndexError(f"rank {rank} out of range for {n} items")
    keys = [key(x) for x in items]
    pivot = _select_key(list(keys), rank)
    before: list[T] = []
    after: list[T] = []
    found = None
    for x, kx in zip(items, keys):
        if kx < pivot:
            before.append(x)
        elif kx > pivot:
            after.append(x)
        else:
            found = x
    return found, before, after  # type: ignore[return-value]

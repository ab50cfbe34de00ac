"""Exhaustive k-nearest-neighbor reference.

Deliberately simple: every distance is computed and the candidates are fully
sorted. Used as ground truth for the tree search.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .core import DimensionError, KdError, Point, sq_distance
from .neighbors import NeighborList

__all__ = ["brute_force_knn"]


def brute_force_knn(
    points: Iterable[Point],
    p: Point | Sequence[float],
    k: int = 1,
    eps: float = math.inf,
) -> NeighborList:
    q = p.coords if isinstance(p, Point) else tuple(float(c) for c in p)
    if int(k) != k or k < 1:
        raise KdError(f"k must be a positive integer, got {k!r}")
    if not eps >= 0:
        raise KdError(f"eps must be non-negative, got {eps!r}")
    candidates = []
    for x in points:
        if x.dim != len(q):
            raise DimensionError(f"point {x.id} is {x.dim}-d, query is {len(q)}-d")
        s = sq_distance(q, x.coords)
        if math.sqrt(s) <= eps:
            candidates.append((s, x.id))
    candidates.sort()
    out = NeighborList(k)
    for s, pid in candidates[:k]:
        out.offer_sq(s, pid)
    return out

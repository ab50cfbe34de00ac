"""epsilon-bounded k-nearest-neighbor queries with traversal counters."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Sequence

from .core import DimensionError, KdError, Point
from .neighbors import NeighborList
from .tree import NONE, BucketTree, KdTree

__all__ = ["QueryStats", "knn", "knn_batch"]


@dataclass
class QueryStats:
    nodes_visited: int = 0
    buckets_examined: int = 0
    distance_evaluations: int = 0

    def __add__(self, other: QueryStats) -> QueryStats:
        return QueryStats(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _check_query(tree, p, k, eps) -> tuple[float, ...]:
    coords = p.coords if isinstance(p, Point) else tuple(float(c) for c in p)
    if len(coords) != tree.dim:
        raise DimensionError(f"query has {len(coords)} coordinates, tree is {tree.dim}-d")
    if not all(math.isfinite(c) for c in coords):
        raise KdError("query coordinates must be finite")
    if int(k) != k or k < 1:
        raise KdError(f"k must be a positive integer, got {k!r}")
    if not eps > 0:
        raise KdError(f"eps must be positive, got {eps!r}")
    return coords


def knn(
    tree: KdTree | BucketTree,
    p: Point | Sequence[float],
    k: int = 1,
    eps: float = math.inf,
    *,
    prune: bool = True,
) -> tuple[NeighborList, QueryStats]:
    """The ``k`` points nearest to ``p`` among those within distance ``eps``.

    Descends first into the side of each plane that contains ``p``
    (``p[dim] <= value`` goes left). The other side is visited only if it can
    still contribute: the list is not full or its worst entry is at least as
    far as the plane, and the plane itself is within ``eps``. With
    ``prune=False`` every node is visited; the result must not change.

    Equal distances are ranked by point id, smaller first.
    """
    q = _check_query(tree, p, k, eps)
    best = NeighborList(k)
    stats = QueryStats()
    if tree.root == NONE:
        return best, stats

    coords, ids = tree._coords, tree._ids
    split_dim, split_value = tree.split_dim, tree.split_value
    left, right = tree.left, tree.right
    bounded = eps != math.inf
    offer = best.offer_sq
    heap = best._heap
    kk = best.k
    bucket = isinstance(tree, BucketTree)
    if bucket:
        starts, stops = tree.leaf_start, tree.leaf_stop

    def examine(j: int) -> None:
        s = 0.0
        for a, c in zip(q, coords[j]):
            t = a - c
            s += t * t
        stats.distance_evaluations += 1
        if bounded and not math.sqrt(s) <= eps:
            return
        offer(s, ids[j])

    def visit(i: int) -> None:
        stats.nodes_visited += 1
        leaf = left[i] == NONE and right[i] == NONE
        if bucket:
            if leaf:
                stats.buckets_examined += 1
                for j in range(starts[i], stops[i]):
                    examine(j)
                return
        else:
            examine(i)
            if leaf:
                stats.buckets_examined += 1
                return
        dim = split_dim[i]
        diff = q[dim] - split_value[i]
        if diff <= 0:
            near, far = left[i], right[i]
        else:
            near, far = right[i], left[i]
        if near != NONE:
            visit(near)
        if far == NONE:
            return
        if prune:
            h = abs(diff)
            if h > eps:
                return
            if len(heap) >= kk and -heap[0][0] < h * h:
                return
        visit(far)

    visit(tree.root)
    return best, stats


def knn_batch(
    tree: KdTree | BucketTree,
    queries: Sequence[Point | Sequence[float]],
    k: int = 1,
    eps: float = math.inf,
    *,
    prune: bool = True,
) -> list[tuple[NeighborList, QueryStats]]:
    return [knn(tree, p, k, eps, prune=prune) for p in queries]

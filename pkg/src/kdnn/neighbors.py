"""Bounded best-k candidate list."""

from __future__ import annotations

import heapq
import math

__all__ = ["NeighborList"]


class NeighborList:
    """The ``k`` best ``(distance, id)`` candidates seen so far.

    Candidates are ranked by distance, then by id, so the kept set is unique
    even with ties. Internally a max-heap on ``(-sq_distance, -id)``: the root
    is the current worst entry and replacing it costs O(log k).
    """

    __slots__ = ("k", "_heap")

    def __init__(self, k: int) -> None:
        if int(k) != k or k < 1:
            raise ValueError(f"k must be a positive integer, got {k!r}")
        self.k = int(k)
        self._heap: list[tuple[float, int]] = []

    def __len__(self) -> int:
        return len(self._heap)

    @property
    def full(self) -> bool:
        return len(self._heap) >= self.k

    def offer_sq(self, sq_dist: float, pid: int) -> bool:
        """Insert a candidate given its squared distance; True if it was kept."""
        heap = self._heap
        if len(heap) < self.k:
            heapq.heappush(heap, (-sq_dist, -pid))
            return True
        wd, wi = heap[0]
        if sq_dist < -wd or (sq_dist == -wd and pid < -wi):
            heapq.heapreplace(heap, (-sq_dist, -pid))
            return True
        return False

    def offer(self, dist: float, pid: int) -> bool:
        return self.offer_sq(dist * dist, pid)

    def farthest_sq(self) -> float:
        """Squared distance of the worst kept entry; inf while not yet full."""
        if len(self._heap) < self.k:
            return math.inf
        return -self._heap[0][0]

    def farthest(self) -> float:
        return math.sqrt(self.farthest_sq())

    def items(self) -> list[tuple[float, int]]:
        """``(distance, id)`` pairs, nearest first."""
        return [(math.sqrt(-nd), -ni) for nd, ni in sorted(self._heap, reverse=True)]

    def ids(self) -> list[int]:
        return [pid for _, pid in self.items()]

    def distances(self) -> list[float]:
        return [dist for dist, _ in self.items()]

    def __iter__(self):
        return iter(self.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NeighborList):
            return NotImplemented
        return self.k == other.k and sorted(self._heap) == sorted(other._heap)

    def __repr__(self) -> str:
        return f"NeighborList(k={self.k}, items={self.items()!r})"

"""k-d tree construction.

Two layouts share one flat, array-backed node store (node 0 is the root,
children are integer links, ``-1`` means "none"):

* :class:`KdTree` -- every node owns exactly one point; interior nodes also
  carry the splitting plane through that point.
* :class:`BucketTree` -- interior nodes carry only a plane, all points live in
  leaves of at most ``b`` points.

Both builders split on the axis of widest spread at the rank-``ceil(m/2)``
point under the ``(coordinate, id)`` order, so the result depends only on the
point set, never on its input order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .core import DimensionError, KdError, Point, PointSet
from .selection import select

__all__ = [
    "SplitPlane",
    "Node",
    "KdTree",
    "BucketTree",
    "spread_dimension",
    "select_median",
    "build",
    "build_bucket",
    "depth",
    "node_count",
    "leaf_census",
]

NONE = -1

# Subsets at most this large are split with the pure-Python selector; larger
# ones go through numpy's introselect.
_SMALL = 48


@dataclass(frozen=True, slots=True)
class SplitPlane:
    """The hyperplane ``x[dim] == value``."""

    dim: int
    value: float


@dataclass(frozen=True, slots=True)
class Node:
    """Read-only view of one node of a tree."""

    index: int
    plane: SplitPlane | None
    left: int | None
    right: int | None
    points: tuple[Point, ...]

    @property
    def is_leaf(self) -> bool:
        return self.left is None and self.right is None


class _FlatTree:
    variant: str = ""

    def __init__(self, dim, points, split_dim, split_value, left, right, root):
        self.dim = dim
        self.points = tuple(points)
        self.split_dim = tuple(split_dim)
        self.split_value = tuple(split_value)
        self.left = tuple(left)
        self.right = tuple(right)
        self.root = root
        # Hot-path mirrors for search.
        self._coords = [p.coords for p in self.points]
        self._ids = [p.id for p in self.points]

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def num_nodes(self) -> int:
        return len(self.split_dim)

    def __len__(self) -> int:
        return len(self.points)

    def plane(self, i: int) -> SplitPlane | None:
        if self.split_dim[i] == NONE:
            return None
        return SplitPlane(self.split_dim[i], self.split_value[i])

    def node_points(self, i: int) -> tuple[Point, ...]:
        raise NotImplementedError

    def node(self, i: int) -> Node:
        left, right = self.left[i], self.right[i]
        return Node(
            index=i,
            plane=self.plane(i),
            left=None if left == NONE else left,
            right=None if right == NONE else right,
            points=self.node_points(i),
        )

    def nodes(self) -> Iterator[Node]:
        for i in range(self.num_nodes):
            yield self.node(i)

    def is_leaf(self, i: int) -> bool:
        return self.left[i] == NONE and self.right[i] == NONE

    def subtree_points(self, i: int) -> list[Point]:
        out: list[Point] = []
        stack = [i]
        while stack:
            j = stack.pop()
            if j == NONE:
                continue
            out.extend(self.node_points(j))
            stack.append(self.right[j])
            stack.append(self.left[j])
        return out

    def to_nested(self, i: int | None = None):
        """Nested ``(ids, plane, left, right)`` tuples; ``None`` for empty subtrees."""
        if i is None:
            i = self.root
        if i == NONE:
            return None
        ids = tuple(p.id for p in self.node_points(i))
        return (ids, self.plane(i), self.to_nested(self.left[i]), self.to_nested(self.right[i]))

    def structure_equal(self, other: _FlatTree) -> bool:
        return (
            type(self) is type(other)
            and self.dim == other.dim
            and self.points == other.points
            and self.split_dim == other.split_dim
            and self.split_value == other.split_value
            and self.left == other.left
            and self.right == other.right
            and self.root == other.root
            and getattr(self, "b", None) == getattr(other, "b", None)
        )


class KdTree(_FlatTree):
    """Interior-point k-d tree; node ``i`` holds ``points[i]``."""

    variant = "interior"

    def node_points(self, i: int) -> tuple[Point, ...]:
        return (self.points[i],)

    def __repr__(self) -> str:
        return f"KdTree(n={self.n}, dim={self.dim})"


class BucketTree(_FlatTree):
    """Leaf-bucket k-d tree; leaf ``i`` holds ``points[leaf_start[i]:leaf_stop[i]]``."""

    variant = "bucket"

    def __init__(self, dim, b, points, split_dim, split_value, left, right, leaf_start, leaf_stop, root):
        super().__init__(dim, points, split_dim, split_value, left, right, root)
        self.b = b
        self.leaf_start = tuple(leaf_start)
        self.leaf_stop = tuple(leaf_stop)

    def node_points(self, i: int) -> tuple[Point, ...]:
        return self.points[self.leaf_start[i]:self.leaf_stop[i]]

    def structure_equal(self, other: _FlatTree) -> bool:
        return (
            super().structure_equal(other)
            and self.leaf_start == other.leaf_start  # type: ignore[attr-defined]
            and self.leaf_stop == other.leaf_stop  # type: ignore[attr-defined]
        )

    def __repr__(self) -> str:
        return f"BucketTree(n={self.n}, dim={self.dim}, b={self.b})"


# -- splitting primitives on Point sequences ---------------------------------


def spread_dimension(points: Sequence[Point]) -> int:
    """Axis with the largest max-min spread; the lowest axis wins ties."""
    if not points:
        raise KdError("spread of an empty point set is undefined")
    d = points[0].dim
    best, best_spread = 0, -1.0
    for j in range(d):
        col = [p.coords[j] for p in points]
        s = max(col) - min(col)
        if s > best_spread:
            best, best_spread = j, s
    return best


def select_median(points: Sequence[Point], dim: int) -> tuple[Point, list[Point], list[Point]]:
    """Split ``points`` at the element of 1-based rank ``ceil(m/2)`` along ``dim``.

    Returns ``(median, before, after)`` with ``len(before) == ceil(m/2) - 1``.
    """
    if not points:
        raise KdError("median of an empty point set is undefined")
    if not 0 <= dim < points[0].dim:
        raise DimensionError(f"axis {dim} out of range for {points[0].dim}-d points")
    rank = (len(points) + 1) // 2 - 1
    return select(points, rank, key=lambda p: (p.coords[dim], p.id))


# -- builders -----------------------------------------------------------------


def _point_set(points: PointSet | Iterable[Point]) -> PointSet:
    if isinstance(points, PointSet):
        return points
    pts = list(points)
    if not pts:
        raise DimensionError("dimension of an empty point list is unknown; pass a PointSet")
    return PointSet(pts)


class _Builder:
    """Shared recursion state. Indices refer to rows of the input set."""

    def __init__(self, ps: PointSet) -> None:
        self.ps = ps
        self.d = ps.dim
        self.rows = ps.coords()
        self.ids = [p.id for p in ps]
        if len(ps):
            self.X = np.asarray(self.rows, dtype=np.float64).reshape(len(ps), self.d)
        else:
            self.X = np.empty((0, self.d))
        self.id_arr = np.asarray(self.ids, dtype=np.int64)
        self.split_dim: list[int] = []
        self.split_value: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []

    def new_node(self) -> int:
        self.split_dim.append(NONE)
        self.split_value.append(0.0)
        self.left.append(NONE)
        self.right.append(NONE)
        return len(self.split_dim) - 1

    def spread(self, idx) -> int:
        if isinstance(idx, np.ndarray):
            sub = self.X[idx]
            return int(np.argmax(sub.max(axis=0) - sub.min(axis=0)))
        rows = self.rows
        best, best_spread = 0, -1.0
        for j in range(self.d):
            col = [rows[i][j] for i in idx]
            s = max(col) - min(col)
            if s > best_spread:
                best, best_spread = j, s
        return best

    def split(self, idx, dim: int, rank: int):
        """Return ``(pivot_row, before, after)`` for the 0-based ``rank``."""
        if not isinstance(idx, np.ndarray):
            rows, ids = self.rows, self.ids
            return select(idx, rank, key=lambda i: (rows[i][dim], ids[i]))
        col = self.X[idx, dim]
        v = np.partition(col, rank)[rank]
        less = col < v
        eq = idx[col == v]
        eq = eq[np.argsort(self.id_arr[eq], kind="stable")]
        need = rank - int(np.count_nonzero(less))
        before = np.concatenate((idx[less], eq[:need]))
        after = np.concatenate((eq[need + 1:], idx[col > v]))
        return int(eq[need]), self._shrink(before), self._shrink(after)

    @staticmethod
    def _shrink(idx: np.ndarray):
        return idx.tolist() if len(idx) <= _SMALL else idx

    def start(self):
        n = len(self.ps)
        return self._shrink(np.arange(n, dtype=np.int64))


def build(points: PointSet | Iterable[Point]) -> KdTree:
    """Build the interior-point k-d tree (one point per node)."""
    ps = _point_set(points)
    bld = _Builder(ps)
    order: list[int] = []

    def rec(idx) -> int:
        m = len(idx)
        if m == 0:
            return NONE
        node = bld.new_node()
        if m == 1:
            order.append(int(idx[0]))
            return node
        dim = bld.spread(idx)
        pivot, before, after = bld.split(idx, dim, (m + 1) // 2 - 1)
        order.append(pivot)
        bld.split_dim[node] = dim
        bld.split_value[node] = bld.rows[pivot][dim]
        bld.left[node] = rec(before)
        bld.right[node] = rec(after)
        return node

    root = rec(bld.start())
    return KdTree(
        dim=ps.dim,
        points=[ps[i] for i in order],
        split_dim=bld.split_dim,
        split_value=bld.split_value,
        left=bld.left,
        right=bld.right,
        root=root,
    )


def build_bucket(points: PointSet | Iterable[Point], b: int) -> BucketTree:
    """Build the leaf-bucket k-d tree with leaf capacity ``b``.

    A subset of more than ``b`` points is split at its median; the median
    point joins the left half.
    """
    if int(b) != b or b < 1:
        raise KdError(f"bucket capacity must be a positive integer, got {b!r}")
    b = int(b)
    ps = _point_set(points)
    bld = _Builder(ps)
    order: list[int] = []
    leaf_start: list[int] = []
    leaf_stop: list[int] = []

    def rec(idx) -> int:
        m = len(idx)
        node = bld.new_node()
        leaf_start.append(0)
        leaf_stop.append(0)
        if m <= b:
            rows = sorted((int(i) for i in idx), key=bld.ids.__getitem__)
            leaf_start[node] = len(order)
            order.extend(rows)
            leaf_stop[node] = len(order)
            return node
        dim = bld.spread(idx)
        pivot, before, after = bld.split(idx, dim, (m + 1) // 2 - 1)
        if isinstance(before, np.ndarray):
            before = np.append(before, pivot)
        else:
            before = [*before, pivot]
        bld.split_dim[node] = dim
        bld.split_value[node] = bld.rows[pivot][dim]
        bld.left[node] = rec(before)
        bld.right[node] = rec(after)
        return node

    root = rec(bld.start()) if len(ps) else NONE
    return BucketTree(
        dim=ps.dim,
        b=b,
        points=[ps[i] for i in order],
        split_dim=bld.split_dim,
        split_value=bld.split_value,
        left=bld.left,
        right=bld.right,
        leaf_start=leaf_start,
        leaf_stop=leaf_stop,
        root=root,
    )


# -- measurements -------------------------------------------------------------


def depth(tree: _FlatTree) -> int:
    """Number of nodes on the longest root-to-leaf path (0 for an empty tree)."""
    if tree.root == NONE:
        return 0
    best = 0
    stack = [(tree.root, 1)]
    while stack:
        i, h = stack.pop()
        best = max(best, h)
        for c in (tree.left[i], tree.right[i]):
            if c != NONE:
                stack.append((c, h + 1))
    return best


def node_count(tree: _FlatTree) -> int:
    return tree.num_nodes


def leaf_census(tree: BucketTree) -> list[int]:
    """Leaf sizes, left to right."""
    if tree.root == NONE:
        return []
    sizes = []
    stack = [tree.root]
    while stack:
        i = stack.pop()
        if tree.is_leaf(i):
            sizes.append(tree.leaf_stop[i] - tree.leaf_start[i])
        else:
            stack.append(tree.right[i])
            stack.append(tree.left[i])
    return sizes


def ceil_log2(n: int) -> int:
    return 0 if n <= 1 else math.ceil(math.log2(n))

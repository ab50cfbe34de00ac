"""Points, Euclidean distances and the per-axis total order used by the builders."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "KdError",
    "DimensionError",
    "Point",
    "PointSet",
    "as_point",
    "compare_along",
    "distance",
    "hyperplane_distance",
    "sq_distance",
]


class KdError(ValueError):
    """Base class for malformed input to the library."""


class DimensionError(KdError):
    """Coordinates of mismatched length, or a dimension index out of range."""


@dataclass(frozen=True, slots=True)
class Point:
    """A point in R^d with a stable integer identity.

    The id only matters for tie-breaking: two points with equal coordinates
    are still ordered, by id.
    """

    coords: tuple[float, ...]
    id: int = 0

    def __post_init__(self) -> None:
        coords = tuple(float(c) for c in self.coords)
        if not coords:
            raise DimensionError("a point needs at least one coordinate")
        if not all(math.isfinite(c) for c in coords):
            raise KdError(f"non-finite coordinate in {coords!r}")
        if self.id < 0:
            raise KdError(f"point id must be non-negative, got {self.id}")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "id", int(self.id))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> float:
        return self.coords[i]


def as_point(p: Point | Sequence[float], id: int = 0) -> Point:
    if isinstance(p, Point):
        return p
    return Point(tuple(p), id)


class PointSet(Sequence[Point]):
    """An immutable, ordered collection of points sharing one dimension."""

    __slots__ = ("_points", "dim")

    def __init__(self, points: Iterable[Point], dim: int | None = None) -> None:
        pts = tuple(points)
        if dim is None:
            if not pts:
                raise DimensionError("dim is required for an empty point set")
            dim = pts[0].dim
        if dim < 1:
            raise DimensionError(f"dimension must be >= 1, got {dim}")
        seen = set()
        for p in pts:
            if p.dim != dim:
                raise DimensionError(f"point {p.id} has {p.dim} coordinates, expected {dim}")
            if p.id in seen:
                raise KdError(f"duplicate point id {p.id}")
            seen.add(p.id)
        self._points = pts
        self.dim = dim

    @classmethod
    def from_coords(cls, rows: Iterable[Sequence[float]], dim: int | None = None) -> PointSet:
        """Number the rows 0..n-1 in order."""
        return cls((Point(tuple(r), i) for i, r in enumerate(rows)), dim)

    def __len__(self) -> int:
        return len(self._points)

    def __getitem__(self, i):  # type: ignore[override]
        return self._points[i]

    def __iter__(self):
        return iter(self._points)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.dim == other.dim and self._points == other._points

    def __hash__(self) -> int:
        return hash((self.dim, self._points))

    def __repr__(self) -> str:
        return f"PointSet(n={len(self)}, dim={self.dim})"

    def coords(self) -> list[tuple[float, ...]]:
        return [p.coords for p in self._points]


def sq_distance(a: Sequence[float], b: Sequence[float]) -> float:
    # Summation order is fixed (axis 0 first) so every caller gets identical bits.
    s = 0.0
    for x, y in zip(a, b):
        t = x - y
        s += t * t
    return s


def distance(a: Point | Sequence[float], b: Point | Sequence[float]) -> float:
    ac = a.coords if isinstance(a, Point) else a
    bc = b.coords if isinstance(b, Point) else b
    if len(ac) != len(bc):
        raise DimensionError(f"cannot compare {len(ac)}-d and {len(bc)}-d points")
    return math.sqrt(sq_distance(ac, bc))


def _check_axis(dim: int, d: int) -> None:
    if not 0 <= dim < d:
        raise DimensionError(f"axis {dim} out of range for {d}-d points")


def compare_along(dim: int, a: Point, b: Point) -> int:
    """Return -1 if ``a`` precedes ``b`` along axis ``dim``, +1 otherwise.

    Coordinates decide first; equal coordinates fall back to the ids, so the
    order is strict for any two distinct points. Comparing a point with
    itself returns 0.
    """
    _check_axis(dim, min(a.dim, b.dim))
    ka = (a.coords[dim], a.id)
    kb = (b.coords[dim], b.id)
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0


def hyperplane_distance(p: Point | Sequence[float], dim: int, value: float) -> float:
    """Distance from ``p`` to the axis-orthogonal plane ``x[dim] == value``."""
    c = p.coords if isinstance(p, Point) else p
    _check_axis(dim, len(c))
    return abs(c[dim] - value)

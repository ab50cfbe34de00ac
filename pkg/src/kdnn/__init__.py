"""k-d trees with epsilon-bounded k-nearest-neighbor search, plus tools for
checking the expected-logarithmic query cost empirically."""

from .core import DimensionError, KdError, Point, PointSet, compare_along, distance, hyperplane_distance
from .neighbors import NeighborList
from .oracle import brute_force_knn
from .persist import CorruptTreeError
from .search import QueryStats, knn, knn_batch
from .tree import (
    BucketTree,
    KdTree,
    SplitPlane,
    build,
    build_bucket,
    depth,
    leaf_census,
    node_count,
    select_median,
    spread_dimension,
)

__all__ = [
    "BucketTree",
    "CorruptTreeError",
    "DimensionError",
    "KdError",
    "KdTree",
    "NeighborList",
    "Point",
    "PointSet",
    "QueryStats",
    "SplitPlane",
    "brute_force_knn",
    "build",
    "build_bucket",
    "compare_along",
    "depth",
    "distance",
    "hyperplane_distance",
    "knn",
    "knn_batch",
    "leaf_census",
    "node_count",
    "select_median",
    "spread_dimension",
]

__version__ = "0.1.0"

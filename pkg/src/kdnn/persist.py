"""KDX1 binary tree files.

Layout, all integers and doubles little-endian::

    header  "KDX1"            4 bytes magic (the trailing 1 is the format version)
            variant           u8   0 = interior-point tree, 1 = bucket tree
            padding           3 bytes, zero
            d                 u32  dimension
            n                 u64  number of points
            b                 u32  bucket capacity (0 for the interior variant)
            node_count        u32
            root              u32  0xFFFFFFFF for the empty tree
    node    plane dim         u32  0xFFFFFFFF when the node has no plane
            plane value       f64  0.0 when the node has no plane
            left, right       u32  child node index, 0xFFFFFFFF for none
            count             u32  number of points stored in this node
            count x (id u64, d x f64)

Nodes follow in index order. ``dumps(loads(blob)) == blob`` for every valid blob.
"""

from __future__ import annotations

import struct
from pathlib import Path

from .core import KdError, Point
from .tree import NONE, BucketTree, KdTree

__all__ = ["CorruptTreeError", "MAGIC", "dumps", "loads", "save", "load"]

MAGIC = b"KDX1"
SENTINEL = 0xFFFFFFFF

_HEADER = struct.Struct("<4sB3xIQIII")
_NODE = struct.Struct("<IdIII")
_VARIANTS = {0: "interior", 1: "bucket"}


class CorruptTreeError(KdError):
    """The byte stream is not a well-formed KDX1 tree."""


def _u32(i: int) -> int:
    return SENTINEL if i == NONE else i


def _idx(u: int) -> int:
    return NONE if u == SENTINEL else u


def dumps(tree: KdTree | BucketTree) -> bytes:
    if isinstance(tree, BucketTree):
        tag, b = 1, tree.b
    elif isinstance(tree, KdTree):
        tag, b = 0, 0
    else:
        raise TypeError(f"cannot serialize {type(tree).__name__}")
    d = tree.dim
    point = struct.Struct(f"<Q{d}d")
    out = [_HEADER.pack(MAGIC, tag, d, tree.n, b, tree.num_nodes, _u32(tree.root))]
    for i in range(tree.num_nodes):
        pts = tree.node_points(i)
        out.append(_NODE.pack(
            _u32(tree.split_dim[i]), tree.split_value[i],
            _u32(tree.left[i]), _u32(tree.right[i]), len(pts),
        ))
        out.extend(point.pack(p.id, *p.coords) for p in pts)
    return b"".join(out)


def loads(blob: bytes) -> KdTree | BucketTree:
    try:
        return _loads(memoryview(blob))
    except CorruptTreeError:
        raise
    except (struct.error, KdError, IndexError, OverflowError) as exc:
        raise CorruptTreeError(f"malformed KDX1 data: {exc}") from exc


def _loads(buf: memoryview) -> KdTree | BucketTree:
    if len(buf) < _HEADER.size or bytes(buf[:4]) != MAGIC:
        raise CorruptTreeError("not a KDX1 file (bad magic or version)")
    _, tag, d, n, b, num_nodes, root = _HEADER.unpack_from(buf, 0)
    if tag not in _VARIANTS:
        raise CorruptTreeError(f"unknown variant tag {tag}")
    if d < 1:
        raise CorruptTreeError("dimension must be >= 1")
    point = struct.Struct(f"<Q{d}d")
    off = _HEADER.size
    split_dim, split_value, left, right, counts = [], [], [], [], []
    points: list[Point] = []
    for _ in range(num_nodes):
        sd, sv, lc, rc, cnt = _NODE.unpack_from(buf, off)
        off += _NODE.size
        for _ in range(cnt):
            pid, *coords = point.unpack_from(buf, off)
            off += point.size
            points.append(Point(tuple(coords), pid))
        split_dim.append(_idx(sd))
        split_value.append(sv)
        left.append(_idx(lc))
        right.append(_idx(rc))
        counts.append(cnt)
    if off != len(buf):
        raise CorruptTreeError(f"{len(buf) - off} trailing bytes")
    if len(points) != n:
        raise CorruptTreeError(f"header says {n} points, found {len(points)}")
    if len({p.id for p in points}) != n:
        raise CorruptTreeError("duplicate point ids")
    root = _idx(root)
    if (root == NONE) != (num_nodes == 0) or root >= num_nodes:
        raise CorruptTreeError("bad root index")
    for i in range(num_nodes):
        for c in (left[i], right[i]):
            if c != NONE and not i < c < num_nodes:
                raise CorruptTreeError(f"node {i} has bad child link {c}")
        if split_dim[i] != NONE and split_dim[i] >= d:
            raise CorruptTreeError(f"node {i} splits on axis {split_dim[i]} >= {d}")

    if tag == 0:
        if any(c != 1 for c in counts) or b != 0:
            raise CorruptTreeError("interior-point nodes must hold exactly one point")
        return KdTree(d, points, split_dim, split_value, left, right, root)

    if b < 1:
        raise CorruptTreeError("bucket capacity must be >= 1")
    starts, stops, pos = [], [], 0
    for i, cnt in enumerate(counts):
        if left[i] == NONE and right[i] == NONE:
            starts.append(pos)
            pos += cnt
            stops.append(pos)
        elif cnt:
            raise CorruptTreeError(f"interior bucket node {i} holds points")
        else:
            starts.append(0)
            stops.append(0)
    return BucketTree(d, b, points, split_dim, split_value, left, right, starts, stops, root)


def save(tree: KdTree | BucketTree, path: str | Path) -> None:
    Path(path).write_bytes(dumps(tree))


def load(path: str | Path) -> KdTree | BucketTree:
    return loads(Path(path).read_bytes())

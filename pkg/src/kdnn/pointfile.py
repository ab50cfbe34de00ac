"""Plain-text point files.

An optional first line ``# dim=<d>``, then one point per line as ``d``
comma-separated decimals. A point's id is its 0-based position among the
data lines. Coordinates are written with 17 significant digits, so
``parse(render(ps)) == ps`` bit for bit.
"""

from __future__ import annotations

import math
import re
from pathlib import Path

from .core import KdError, Point, PointSet

__all__ = ["PointFileError", "parse", "render", "read", "write"]

_HEADER = re.compile(r"#\s*dim\s*=\s*(\d+)\s*$")


class PointFileError(KdError):
    pass


def render(ps: PointSet) -> str:
    lines = [f"# dim={ps.dim}"]
    lines.extend(",".join(format(c, ".17g") for c in p.coords) for p in ps)
    return "\n".join(lines) + "\n"


def parse(text: str) -> PointSet:
    lines = text.splitlines()
    dim = None
    if lines and lines[0].lstrip().startswith("#"):
        m = _HEADER.match(lines[0].strip())
        if not m:
            raise PointFileError(f"bad header line {lines[0]!r}; expected '# dim=<d>'")
        dim = int(m.group(1))
        if dim < 1:
            raise PointFileError("dim must be >= 1")
        lines = lines[1:]
    rows = []
    for lineno, line in enumerate(lines, start=2 if dim is not None else 1):
        if not line.strip():
            continue
        try:
            row = tuple(float(tok) for tok in line.split(","))
        except ValueError:
            raise PointFileError(f"line {lineno}: not a list of numbers: {line!r}") from None
        if not all(math.isfinite(c) for c in row):
            raise PointFileError(f"line {lineno}: non-finite coordinate")
        if dim is None:
            dim = len(row)
        if len(row) != dim:
            raise PointFileError(f"line {lineno}: expected {dim} coordinates, got {len(row)}")
        rows.append(row)
    if dim is None:
        raise PointFileError("empty point file without a '# dim=<d>' header")
    return PointSet((Point(r, i) for i, r in enumerate(rows)), dim)


def read(path: str | Path) -> PointSet:
    return parse(Path(path).read_text())


def write(ps: PointSet, path: str | Path) -> None:
    Path(path).write_text(render(ps))

import random

import pytest

from kdnn import Point, PointSet

# The eight points of the worked 2-d example; p1..p8 get ids 0..7.
EIGHT_POINTS = [(1, 6.5), (1.5, 1.5), (2.5, 4.5), (4, 7.5), (6, 2), (7, 6.5), (7.5, 1), (7.5, 7.5)]


@pytest.fixture
def eight() -> PointSet:
    return PointSet.from_coords(EIGHT_POINTS)


def random_points(rng: random.Random, n: int, d: int, grid: int | None = None) -> PointSet:
    """Uniform points; with ``grid`` the coordinates are small integers, so
    duplicates and exact distance ties are common."""
    if grid:
        rows = [tuple(float(rng.randrange(grid)) for _ in range(d)) for _ in range(n)]
    else:
        rows = [tuple(rng.random() for _ in range(d)) for _ in range(n)]
    ids = rng.sample(range(10 * n + 10), n)
    return PointSet((Point(r, i) for r, i in zip(rows, ids)), d)


# Acceptance results, printed as one line per criterion at the end of the run.
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0])):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")

import math
import random
import time

import pytest

from kdnn import KdError, Point, PointSet, SplitPlane, build, build_bucket, depth, leaf_census, node_count
from kdnn.tree import ceil_log2, select_median, spread_dimension

from conftest import EIGHT_POINTS, random_points


def nested_reference(points):
    """Interior-point tree as nested tuples, built from the public primitives."""
    if not points:
        return None
    if len(points) == 1:
        return ((points[0].id,), None, None, None)
    dim = spread_dimension(points)
    med, before, after = select_median(points, dim)
    return ((med.id,), SplitPlane(dim, med.coords[dim]), nested_reference(before), nested_reference(after))


def bucket_reference(points, b):
    if len(points) <= b:
        return (tuple(sorted(p.id for p in points)), None, None, None)
    dim = spread_dimension(points)
    med, before, after = select_median(points, dim)
    return ((), SplitPlane(dim, med.coords[dim]), bucket_reference(before + [med], b), bucket_reference(after, b))


def leaf(i):
    return ((i,), None, None, None)


GOLDEN = (
    (3,), SplitPlane(0, 4.0),
    ((2,), SplitPlane(1, 4.5), leaf(1), leaf(0)),
    ((4,), SplitPlane(1, 2.0), leaf(6), ((5,), SplitPlane(1, 6.5), None, leaf(7))),
)


def test_spread_dimension_examples(eight):
    assert spread_dimension(list(eight)) == 0
    assert spread_dimension([Point((0, 0), 0), Point((0, 5), 1)]) == 1
    assert spread_dimension([eight[0], eight[1], eight[2]]) == 1
    with pytest.raises(KdError):
        spread_dimension([])


def test_select_median_examples(eight):
    med, before, after = select_median(list(eight), 0)
    assert med.id == 3
    assert {p.id for p in before} == {0, 1, 2}
    assert {p.id for p in after} == {4, 5, 6, 7}

    single = Point((5, 5), 0)
    assert select_median([single], 1) == (single, [], [])

    right = [eight[6], eight[4], eight[5], eight[7]]
    med, before, after = select_median(right, 1)
    assert med.id == 4
    assert [p.id for p in before] == [6]
    assert {p.id for p in after} == {5, 7}
    with pytest.raises(KdError):
        select_median([], 0)


def test_build_golden_tree(eight):
    tree = build(eight)
    assert tree.to_nested() == GOLDEN
    assert depth(tree) == 4
    assert node_count(tree) == 8


def test_build_trivial_cases():
    empty = build(PointSet([], dim=2))
    assert empty.to_nested() is None and depth(empty) == 0 and node_count(empty) == 0
    one = build(PointSet.from_coords([(5, 5)]))
    assert one.to_nested() == leaf(0)
    assert one.node(one.root).plane is None


def test_build_rejects_mixed_dimensions():
    with pytest.raises(KdError):
        build([Point((0, 0), 0), Point((1, 1, 1), 1)])


def test_build_bucket_examples(eight):
    t8 = build_bucket(eight, 8)
    assert leaf_census(t8) == [8]
    t1 = build_bucket(eight, 1)
    assert leaf_census(t1) == [1] * 8
    assert all(n.plane is not None for n in t1.nodes() if not n.is_leaf)
    assert all(not n.points for n in t1.nodes() if not n.is_leaf)
    t4 = build_bucket(eight, 4)
    assert t4.to_nested() == ((), SplitPlane(0, 4.0), ((0, 1, 2, 3), None, None, None),
                              ((4, 5, 6, 7), None, None, None))
    assert leaf_census(t4) == [4, 4]
    with pytest.raises(KdError):
        build_bucket(eight, 0)


@pytest.mark.parametrize("seed", range(6))
def test_build_matches_reference_recursion(seed):
    # n well above the small-subset threshold exercises the numpy split.
    rng = random.Random(seed)
    d = rng.choice([1, 2, 3, 5])
    ps = random_points(rng, rng.randrange(100, 700), d, grid=rng.choice([None, 4, 30]))
    assert build(ps).to_nested() == nested_reference(list(ps))
    b = rng.choice([1, 3, 8])
    assert build_bucket(ps, b).to_nested() == bucket_reference(list(ps), b)


@pytest.mark.parametrize("seed", range(4))
def test_permutation_invariance(seed):
    rng = random.Random(seed)
    ps = random_points(rng, 300, 3, grid=5 if seed % 2 else None)
    shuffled = list(ps)
    rng.shuffle(shuffled)
    ps2 = PointSet(shuffled, ps.dim)
    assert build(ps).structure_equal(build(ps2))
    assert build_bucket(ps, 4).structure_equal(build_bucket(ps2, 4))


def _check_partition(tree):
    """Every point under a plane lies on the correct side; returns violations."""
    bad = 0
    for node in tree.nodes():
        if node.plane is None:
            continue
        dim, v = node.plane.dim, node.plane.value
        pivot = node.points[0] if node.points else None
        for side, child in ((-1, node.left), (1, node.right)):
            if child is None:
                continue
            for p in tree.subtree_points(child):
                if pivot is not None:
                    key, pk = (p.coords[dim], p.id), (pivot.coords[dim], pivot.id)
                    bad += not ((key < pk) if side < 0 else (key > pk))
                else:
                    bad += not ((p.coords[dim] <= v) if side < 0 else (p.coords[dim] >= v))
    return bad


def _check_subtree_sizes(tree):
    for node in tree.nodes():
        m = len(tree.subtree_points(node.index))
        nl = len(tree.subtree_points(node.left)) if node.left is not None else 0
        nr = len(tree.subtree_points(node.right)) if node.right is not None else 0
        if m > 1:
            assert nl == math.ceil(m / 2) - 1 and nr == m - math.ceil(m / 2)


@pytest.mark.parametrize("seed", range(5))
def test_invariants_random(seed):
    rng = random.Random(100 + seed)
    n = rng.randrange(1, 400)
    ps = random_points(rng, n, rng.choice([1, 2, 4]), grid=rng.choice([None, 3]))
    tree = build(ps)
    assert node_count(tree) == n
    assert sorted(p.id for p in tree.points) == sorted(p.id for p in ps)
    assert depth(tree) <= ceil_log2(n) + 1
    assert _check_partition(tree) == 0
    _check_subtree_sizes(tree)

    bt = build_bucket(ps, 4)
    assert sorted(p.id for p in bt.points) == sorted(p.id for p in ps)
    assert sum(leaf_census(bt)) == n
    assert _check_partition(bt) == 0


def test_balance_over_sizes():
    rng = random.Random(7)
    for n in list(range(1, 80)) + [rng.randrange(80, 1001) for _ in range(20)]:
        tree = build(random_points(rng, n, 2))
        assert node_count(tree) == n
        assert depth(tree) <= ceil_log2(n) + 1


@pytest.mark.parametrize("b", [1, 2, 4, 8, 16])
def test_bucket_occupancy(b):
    rng = random.Random(b)
    for _ in range(10):
        n = rng.randrange(b, 600)
        sizes = leaf_census(build_bucket(random_points(rng, n, rng.choice([2, 3]), grid=rng.choice([None, 6])), b))
        assert all(math.ceil(b / 2) <= s <= b for s in sizes), sizes


def test_all_points_coincide():
    ps = PointSet(Point((1.0, 1.0), i) for i in range(50))
    tree = build(ps)
    assert node_count(tree) == 50 and depth(tree) <= ceil_log2(50) + 1
    assert set(leaf_census(build_bucket(ps, 3))) <= {2, 3}


@pytest.mark.slow
def test_build_time_scaling_smoke():
    # n log n growth: doubling n should cost well under 2.6x on average. A
    # smoke check only; timing noise on shared machines is real.
    rng = random.Random(0)
    n = 2 ** 16
    small = random_points(rng, n, 2)
    large = random_points(rng, 2 * n, 2)
    def mean_time(ps):
        return sum(_timed(build_bucket, ps, 1) for _ in range(3)) / 3
    ratio = mean_time(large) / mean_time(small)
    print(f"build time ratio t(2n)/t(n) = {ratio:.2f}")
    assert ratio <= 2.6


def _timed(fn, *args):
    t0 = time.perf_counter()
    fn(*args)
    return time.perf_counter() - t0

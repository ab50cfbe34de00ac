import math

import pytest
from hypothesis import given, strategies as st

from kdnn import NeighborList


def test_farthest_is_infinite_until_full():
    nl = NeighborList(2)
    assert nl.farthest() == math.inf
    nl.offer(3.0, 1)
    assert nl.farthest() == math.inf
    nl.offer(1.0, 2)
    assert nl.farthest() == 3.0


def test_replacement_and_tie_rule():
    nl = NeighborList(2)
    for dist, pid in [(1.0, 5), (2.0, 9), (2.0, 3), (0.5, 7)]:
        nl.offer(dist, pid)
    assert nl.items() == [(0.5, 7), (1.0, 5)]
    nl = NeighborList(1)
    nl.offer(2.0, 9)
    assert not nl.offer(2.0, 10)
    assert nl.offer(2.0, 3)
    assert nl.ids() == [3]


def test_bad_capacity():
    with pytest.raises(ValueError):
        NeighborList(0)


@given(st.lists(st.tuples(st.integers(0, 20), st.integers(0, 1000)), unique_by=lambda t: t[1]),
       st.integers(1, 10))
def test_keeps_k_smallest(cands, k):
    nl = NeighborList(k)
    for dist, pid in cands:
        nl.offer(float(dist), pid)
    expected = sorted((float(d), i) for d, i in cands)[:k]
    assert nl.items() == expected
    assert len(nl) <= k

"""
Tests for the partially persistent segment tree.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dispersion.exceptions import IndexOutOfRangeError, InvalidSizeError, VersionError
from dispersion.pst import PersistentSegmentTree


class NaiveVersions:
    """One full array copy per version."""

    def __init__(self, n: int):
        self.versions = [[0] * (n + 1)]

    def add(self, i: int, j: int) -> None:
        nxt = list(self.versions[-1])
        for x in range(i, j + 1):
            nxt[x] += 1
        self.versions.append(nxt)

    def query(self, i: int, t: int) -> int:
        return self.versions[t][i]


class TestBasics:
    """Tests for construction, ADD and QUERY."""

    def test_new_tree_is_zero(self):
        """Test version 0 is all zeros."""
        assert PersistentSegmentTree(3).query(2, 0) == 0
        assert PersistentSegmentTree(1).query(1, 0) == 0

    def test_zero_size_rejected(self):
        """Test new(0) raises InvalidSizeError."""
        with pytest.raises(InvalidSizeError):
            PersistentSegmentTree(0)

    def test_add_creates_versions(self):
        """Test versions reflect exactly the first t ADDs."""
        tree = PersistentSegmentTree(3)
        assert tree.add(1, 2) == 1
        assert tree.query(2, 1) == 1
        assert tree.add(2, 3) == 2
        assert tree.query(2, 2) == 2
        assert tree.query(1, 2) == 1
        assert tree.query(1, 0) == 0
        assert tree.query(3, 1) == 0

    def test_full_range_adds(self):
        """Test repeated whole-array ADDs."""
        tree = PersistentSegmentTree(4)
        tree.add(1, 4)
        tree.add(1, 4)
        assert tree.query(3, 2) == 2

    def test_amount(self):
        """Test ADD with an explicit amount."""
        tree = PersistentSegmentTree(8)
        tree.add(3, 6, 5)
        assert [tree.query(i, 1) for i in range(1, 9)] == [0, 0, 5, 5, 5, 5, 0, 0]

    def test_out_of_range_add(self):
        """Test ADD outside 1..n raises an IndexError."""
        tree = PersistentSegmentTree(3)
        with pytest.raises(IndexError):
            tree.add(0, 2)
        with pytest.raises(IndexOutOfRangeError):
            tree.add(2, 4)
        with pytest.raises(IndexOutOfRangeError):
            tree.add(3, 2)

    def test_unknown_version(self):
        """Test QUERY at a version not yet created raises VersionError."""
        tree = PersistentSegmentTree(3)
        tree.add(1, 1)
        with pytest.raises(VersionError):
            tree.query(1, 2)
        with pytest.raises(IndexOutOfRangeError):
            tree.query(4, 0)


class TestAgainstNaive:
    """Seeded equivalence with a copy-per-version implementation."""

    def test_random_operations(self, rng):
        """Test 10^5 random ADD/QUERY operations agree exactly and node growth stays logarithmic."""
        n = 64
        tree = PersistentSegmentTree(n)
        naive = NaiveVersions(n)
        per_add = 2 * (math.ceil(math.log2(n)) + 1)
        ops = rng.integers(0, 2, size=100_000)
        for op in ops:
            if op == 0 and len(naive.versions) < 3000:
                i, j = sorted(int(v) for v in rng.integers(1, n + 1, size=2))
                before = tree.node_count
                tree.add(i, j)
                naive.add(i, j)
                assert tree.node_count - before <= per_add
            else:
                i = int(rng.integers(1, n + 1))
                t = int(rng.integers(0, tree.versions + 1))
                assert tree.query(i, t) == naive.query(i, t)

    @pytest.mark.property_based
    @given(
        st.integers(1, 40).flatmap(
            lambda n: st.tuples(
                st.just(n),
                st.lists(st.tuples(st.integers(1, n), st.integers(1, n)), max_size=30),
            )
        )
    )
    @settings(max_examples=100, deadline=None)
    def test_queries_nondecreasing_in_version(self, case):
        """Property: query(i, t) is nondecreasing in t and matches the naive arrays."""
        n, adds = case
        tree = PersistentSegmentTree(n)
        naive = NaiveVersions(n)
        for a, b in adds:
            i, j = min(a, b), max(a, b)
            tree.add(i, j)
            naive.add(i, j)
        for i in range(1, n + 1):
            values = [tree.query(i, t) for t in range(tree.versions + 1)]
            assert values == sorted(values)
            assert values == [naive.query(i, t) for t in range(tree.versions + 1)]

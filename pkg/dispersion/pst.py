"""
Partially persistent segment tree with range-add and point-query.

Version 0 is all zeros; version t reflects exactly the first t ADD operations.
Nodes live in an append-only pool. A node stores its two children and the
add-counts applied to each child's full range, so an ADD copies only the
nodes whose range partially overlaps the update (at most two per level) and
never touches old versions. A point query sums the counts met on the path
from the root to the leaf. Indices are 1-based.
"""

from .exceptions import IndexOutOfRangeError, InvalidSizeError, VersionError


class PersistentSegmentTree:
    """Versioned integer array supporting ADD(i, j) and QUERY(i, t)."""

    __slots__ = ("_n", "_left", "_right", "_left_add", "_right_add", "_roots", "_root_add")

    def __init__(self, n: int):
        if n < 1:
            raise InvalidSizeError(n)
        self._n = n
        # node 0 is the shared all-zero subtree
        self._left: list[int] = [0]
        self._right: list[int] = [0]
        self._left_add: list[int] = [0]
        self._right_add: list[int] = [0]
        self._roots: list[int] = [0]
        self._root_add: list[int] = [0]

    @property
    def size(self) -> int:
        return self._n

    @property
    def versions(self) -> int:
        """Number of ADD operations performed (the latest version id)."""
        return len(self._roots) - 1

    @property
    def node_count(self) -> int:
        return len(self._left)

    def _copy(self, node: int) -> int:
        self._left.append(self._left[node])
        self._right.append(self._right[node])
        self._left_add.append(self._left_add[node])
        self._right_add.append(self._right_add[node])
        return len(self._left) - 1

    def _add(self, node: int, lo: int, hi: int, i: int, j: int, amount: int) -> int:
        # [lo, hi] partially overlaps [i, j], so it has two children
        new = self._copy(node)
        mid = (lo + hi) // 2
        if i <= lo and mid <= j:
            self._left_add[new] += amount
        elif i <= mid:
            self._left[new] = self._add(self._left[node], lo, mid, i, j, amount)
        if i <= mid + 1 and hi <= j:
            self._right_add[new] += amount
        elif j > mid:
            self._right[new] = self._add(self._right[node], mid + 1, hi, i, j, amount)
        return new

    def add(self, i: int, j: int, amount: int = 1) -> int:
        """Create a new version with ``amount`` added to positions i..j; return its id."""
        if not 1 <= i <= j <= self._n:
            raise IndexOutOfRangeError(f"ADD range [{i}, {j}] outside 1..{self._n}")
        root = self._roots[-1]
        root_add = self._root_add[-1]
        if i == 1 and j == self._n:
            root_add += amount
        else:
            root = self._add(root, 1, self._n, i, j, amount)
        self._roots.append(root)
        self._root_add.append(root_add)
        return self.versions

    def query(self, i: int, t: int) -> int:
        """Value at position ``i`` after the first ``t`` ADD operations."""
        if not 1 <= i <= self._n:
            raise IndexOutOfRangeError(f"QUERY index {i} outside 1..{self._n}")
        if not 0 <= t <= self.versions:
            raise VersionError(t, self.versions)
        total = self._root_add[t]
        node = self._roots[t]
        lo, hi = 1, self._n
        while lo < hi:
            mid = (lo + hi) // 2
            if i <= mid:
                total += self._left_add[node]
                node = self._left[node]
                hi = mid
            else:
                total += self._right_add[node]
                node = self._right[node]
                lo = mid + 1
        return total

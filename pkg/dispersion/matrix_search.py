"""
Selection of the extreme feasible value among implicitly represented sorted arrays.

Each array of a :class:`CandidateFamily` is nonincreasing in its position and
is only evaluated on demand. A single core searches ascending arrays for the
smallest feasible value; the feasible-below mode (largest feasible value) runs
the same core on negated values.

Per iteration every surviving array contributes the median of its surviving
window, weighted by the window length. One predicate call on the weighted
median discards at least a quarter of the surviving entries, so the number of
predicate calls is logarithmic in the total number of entries.
"""

import bisect
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .config import get_settings
from .exceptions import ModelInvariantViolation, NoFeasibleCandidateError
from .logging_config import get_logger


logger = get_logger("dispersion.matrix_search")


class Direction(str, Enum):
    """Side of the threshold on which the predicate holds."""
    FEASIBLE_BELOW = "feasible-below"
    FEASIBLE_ABOVE = "feasible-above"


@dataclass(frozen=True)
class CandidateFamily:
    """M arrays; ``evaluate(i, t)`` must be nonincreasing in ``t`` for every row ``i``."""

    lengths: Sequence[int]
    evaluate: Callable[[int, int], float]

    @property
    def rows(self) -> int:
        return len(self.lengths)

    @property
    def total(self) -> int:
        return int(sum(self.lengths))

    def spot_check(self, samples: int = 64, seed: int = 0) -> tuple[int, int] | None:
        """Sample adjacent pairs; return the first ``(i, t)`` with eval(i, t) < eval(i, t+1)."""
        rng = random.Random(seed)
        rows = [i for i, n in enumerate(self.lengths) if n > 1]
        for _ in range(samples if rows else 0):
            i = rng.choice(rows)
            t = rng.randrange(self.lengths[i] - 1)
            if self.evaluate(i, t) < self.evaluate(i, t + 1):
                return i, t
        return None


@dataclass(frozen=True)
class FeasibilityPredicate:
    """Monotone test: true on every value at or below (or above) some threshold."""

    test: Callable[[float], bool]
    direction: Direction = Direction.FEASIBLE_BELOW


@dataclass
class SearchStats:
    predicate_calls: int = 0
    iterations: int = 0
    evaluations: int = 0
    history: list[tuple[float, bool]] = field(default_factory=list)


class _AscendingRow:
    """Ascending view of one row with memoized evaluation."""

    __slots__ = ("_family", "_row", "_length", "_negate", "_cache", "_stats")

    def __init__(self, family: CandidateFamily, row: int, negate: bool, stats: SearchStats):
        self._family = family
        self._row = row
        self._length = family.lengths[row]
        self._negate = negate
        self._cache: dict[int, float] = {}
        self._stats = stats

    def __getitem__(self, t: int) -> float:
        value = self._cache.get(t)
        if value is None:
            self._stats.evaluations += 1
            if self._negate:
                value = -self._family.evaluate(self._row, t)
            else:
                value = self._family.evaluate(self._row, self._length - 1 - t)
            self._cache[t] = value
        return value


def _weighted_median(values: np.ndarray, weights: np.ndarray) -> float:
    order = np.argsort(values, kind="stable")
    cumulative = np.cumsum(weights[order])
    idx = int(np.searchsorted(cumulative, cumulative[-1] / 2.0))
    return float(values[order[idx]])


def _smallest_feasible(
    rows: list[_AscendingRow],
    lengths: Sequence[int],
    test: Callable[[float], bool],
    stats: SearchStats,
) -> float | None:
    lo = [0] * len(rows)
    hi = [int(n) for n in lengths]
    best: float | None = None

    while True:
        active = [i for i in range(len(rows)) if lo[i] < hi[i]]
        if not active:
            return best
        stats.iterations += 1
        reps = np.fromiter(
            (rows[i][(lo[i] + hi[i] - 1) // 2] for i in active), dtype=float, count=len(active)
        )
        weights = np.fromiter((hi[i] - lo[i] for i in active), dtype=float, count=len(active))
        m = _weighted_median(reps, weights)

        stats.predicate_calls += 1
        feasible = bool(test(m))
        if feasible:
            best = m if best is None else min(best, m)
            for i in active:
                hi[i] = bisect.bisect_left(rows[i], m, lo[i], hi[i])
        else:
            for i in active:
                lo[i] = bisect.bisect_right(rows[i], m, lo[i], hi[i])


def optimal_feasible(
    family: CandidateFamily,
    pred: FeasibilityPredicate,
    stats: SearchStats | None = None,
) -> float:
    """
    Return the extreme feasible entry of ``family``.

    Smallest feasible entry for feasible-above predicates, largest for
    feasible-below. The result is always an exact entry of some row.

    Raises:
        NoFeasibleCandidateError: no entry satisfies the predicate
        ModelInvariantViolation: a sampled row is out of order (debug checks only)
    """
    stats = stats if stats is not None else SearchStats()
    if get_settings().debug_checks:
        violation = family.spot_check()
        if violation is not None:
            raise ModelInvariantViolation(f"Candidate row {violation[0]} not sorted at {violation[1]}")

    def probe(v: float) -> bool:
        ok = bool(pred.test(v))
        stats.history.append((v, ok))
        return ok

    negate = pred.direction is Direction.FEASIBLE_BELOW
    rows = [_AscendingRow(family, i, negate, stats) for i in range(family.rows)]
    if negate:
        best = _smallest_feasible(rows, family.lengths, lambda v: probe(-v), stats)
        result = None if best is None else -best
    else:
        result = _smallest_feasible(rows, family.lengths, probe, stats)

    logger.debug(
        "Matrix search done  rows=%d  entries=%d  calls=%d  iterations=%d  evaluations=%d  result=%s",
        family.rows,
        family.total,
        stats.predicate_calls,
        stats.iterations,
        stats.evaluations,
        result,
    )
    if result is None:
        raise NoFeasibleCandidateError()
    return result

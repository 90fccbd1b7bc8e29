"""
Implicit candidate rows shared by the line and circle optimizers.

A row belongs to one pair of boundary functions. Its entry for an integer t is
the radius at which ``gap(lam) = t * step(lam)``, where ``gap`` is
nonincreasing and ``step`` nondecreasing in lam, so entries are nonincreasing
in t. Entries are found by bisection and memoized on first use.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from ..config import get_settings
from ..logging_config import get_logger
from ..matrix_search import CandidateFamily


logger = get_logger("dispersion.candidates")


def bisect_decreasing(f: Callable[[float], float], lo: float, hi: float) -> float:
    """
    Shrink ``[lo, hi]`` around the sign change of a decreasing ``f``.

    Requires f(lo) >= 0 >= f(hi). Returns the low (feasible) end of the final
    bracket, i.e. a value where f is still nonnegative.
    """
    settings = get_settings()
    for _ in range(settings.bisection_max_iter):
        if hi - lo <= settings.rel_eps * max(abs(hi), 1e-300):
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if f(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass
class GapRow:
    """Roots of ``gap(lam) - t * step(lam)`` on ``[lo, hi]`` for t in a contiguous range."""

    gap: Callable[[float], float]
    step: Callable[[float], float]
    lo: float
    hi: float
    t_min: int
    t_max: int
    t_first: int = field(init=False, default=0)
    length: int = field(init=False, default=0)
    _cache: dict[int, float] = field(init=False, default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self.lo < self.hi or self.t_max < self.t_min:
            return
        g_lo = self.gap(self.lo)
        if g_lo < 0.0 or (self.lo <= 0.0 and g_lo <= 0.0):
            return
        s_lo = self.step(self.lo)
        t_upper = self.t_max if s_lo <= 0.0 else min(self.t_max, math.floor(g_lo / s_lo))
        g_hi = self.gap(self.hi)
        t_lower = self.t_min if g_hi <= 0.0 else max(self.t_min, math.ceil(g_hi / self.step(self.hi)))
        if t_upper >= t_lower:
            self.t_first = t_lower
            self.length = t_upper - t_lower + 1

    def value(self, idx: int) -> float:
        cached = self._cache.get(idx)
        if cached is not None:
            return cached
        t = self.t_first + idx

        def f(lam: float) -> float:
            return self.gap(lam) - t * self.step(lam)

        # clamp so that rounding at the bracket ends keeps the row sorted
        if f(self.lo) <= 0.0:
            root = self.lo
        elif f(self.hi) >= 0.0:
            root = self.hi
        else:
            root = bisect_decreasing(f, self.lo, self.hi)
        self._cache[idx] = root
        return root


def build_family(rows: Sequence[GapRow], fixed: Sequence[Sequence[float]] = ()) -> CandidateFamily:
    """Candidate family from nonempty gap rows plus explicit nonincreasing arrays."""
    live = [row for row in rows if row.length > 0]
    arrays = [list(a) for a in fixed if len(a) > 0]
    lengths = [row.length for row in live] + [len(a) for a in arrays]
    split = len(live)

    def evaluate(i: int, t: int) -> float:
        if i < split:
            return live[i].value(t)
        return arrays[i - split][t]

    logger.debug("Candidate family built  rows=%d  fixed=%d  entries=%d", split, len(arrays), sum(lengths))
    return CandidateFamily(lengths=lengths, evaluate=evaluate)


def refine_optimum(
    decide: Callable[[float], bool],
    lam: float,
    upper: float,
    probe: float = 1e-7,
) -> float:
    """
    Check that nothing feasible lies just above ``lam``; bisect up to ``upper`` if it does.

    ``decide`` must be monotone (true below the optimum).
    """
    probe_at = lam * (1.0 + probe)
    if probe_at >= upper or not decide(probe_at):
        return lam

    logger.warning(
        "Optimum lies between candidates, refining by bisection  lam=%.12g  upper=%.12g", lam, upper
    )
    if decide(upper):
        return upper
    settings = get_settings()
    lo, hi = probe_at, upper
    for _ in range(settings.bisection_max_iter):
        if hi - lo <= settings.rel_eps * hi:
            break
        mid = 0.5 * (lo + hi)
        if decide(mid):
            lo = mid
        else:
            hi = mid
    return lo

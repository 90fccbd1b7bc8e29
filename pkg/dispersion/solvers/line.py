"""
Decision and optimization solvers for facilities on a segment.

Two variants share the machinery: axis-aligned squares of side ``s`` (a point
is forbidding iff it lies strictly inside the square) and disks of radius
``lam`` whose centers must stay ``lam / alpha`` apart. All work happens in the
segment frame, where the host is ``[0, |pq|]`` on the x-axis.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence

from ..config import resolve_eps
from ..exceptions import (
    InfeasibleError,
    InvalidGeometryError,
    NoFeasibleCandidateError,
    UnboundedObjectiveError,
)
from ..geometry import (
    FeasibleSet,
    Point,
    Segment,
    SegmentFrame,
    distance_to_host,
    feasible_set,
    forbidden_interval_disk,
    forbidden_interval_square,
    normalize,
)
from ..logging_config import get_logger
from ..matrix_search import Direction, FeasibilityPredicate, SearchStats, optimal_feasible
from .candidates import GapRow, bisect_decreasing, build_family, refine_optimum


logger = get_logger("dispersion.line")


class Shape(str, Enum):
    DISK = "disk"
    SQUARE = "square"


class EndpointKind(str, Enum):
    CONSTANT = "constant"
    RIGHT_OF_FORBIDDEN = "right-of-forbidden"
    LEFT_OF_FORBIDDEN = "left-of-forbidden"


# ============== Domain Types ==============

@dataclass(frozen=True, slots=True)
class LineInstance:
    points: tuple[Point, ...]
    segment: Segment
    k: int
    alpha: float = 1.0

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InvalidGeometryError(f"k must be at least 1, got {self.k}")
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise InvalidGeometryError(f"alpha must be positive, got {self.alpha}")


@dataclass(frozen=True, slots=True)
class EndpointFunc:
    """
    Boundary of a feasible interval as a function of the radius (or square side).

    Right ends of forbidden intervals move right as the radius grows, left ends
    move left; segment endpoints are constant.
    """

    kind: EndpointKind
    x: float
    y: float = 0.0
    shape: Shape = Shape.DISK
    owner: int | None = None

    @classmethod
    def constant(cls, x: float) -> "EndpointFunc":
        return cls(EndpointKind.CONSTANT, x)

    @classmethod
    def right_of(cls, pt: Point, owner: int | None = None, shape: Shape = Shape.DISK) -> "EndpointFunc":
        return cls(EndpointKind.RIGHT_OF_FORBIDDEN, pt.x, pt.y, shape, owner)

    @classmethod
    def left_of(cls, pt: Point, owner: int | None = None, shape: Shape = Shape.DISK) -> "EndpointFunc":
        return cls(EndpointKind.LEFT_OF_FORBIDDEN, pt.x, pt.y, shape, owner)

    @property
    def domain_lo(self) -> float:
        """Smallest parameter at which the owning point forbids anything."""
        if self.kind is EndpointKind.CONSTANT:
            return 0.0
        return abs(self.y) if self.shape is Shape.DISK else 2.0 * abs(self.y)

    def reach(self, lam: float) -> float:
        if self.shape is Shape.SQUARE:
            return 0.5 * lam
        return math.sqrt(max(0.0, lam * lam - self.y * self.y))

    def __call__(self, lam: float) -> float:
        if self.kind is EndpointKind.CONSTANT:
            return self.x
        if self.kind is EndpointKind.RIGHT_OF_FORBIDDEN:
            return self.x + self.reach(lam)
        return self.x - self.reach(lam)


@dataclass(frozen=True)
class Placement:
    """Centers as sorted x-coordinates in the segment frame."""

    centers: tuple[float, ...]
    lam: float
    frame: SegmentFrame
    shape: Shape = Shape.DISK

    @property
    def world(self) -> list[tuple[float, float]]:
        return [self.frame.to_world(x) for x in self.centers]


# ============== Greedy on a Feasible Set ==============

def _greedy_runs(feasible: Iterable[tuple[float, float]], delta: float, eps: float) -> Iterator[tuple[float, int, float]]:
    """Yield ``(first, count, right_end)`` per interval that receives centers."""
    last = -math.inf
    for lo, hi in feasible:
        start = max(lo, last + delta)
        if start > hi + eps:
            continue
        count = max(1, math.floor((hi - start) / delta + eps) + 1)
        last = start + (count - 1) * delta
        yield start, count, hi


def count_on_feasible(feasible: Iterable[tuple[float, float]], delta: float, eps: float | None = None) -> int:
    """
    Maximum number of points with consecutive gaps >= ``delta`` on sorted disjoint closed intervals.

    Leftmost-first greedy: an interval lying entirely within ``delta`` of the
    last center contributes nothing and leaves the last center in place.
    """
    eps = resolve_eps(eps)
    return sum(count for _, count, _ in _greedy_runs(feasible, delta, eps))


def place_on_feasible(
    feasible: Iterable[tuple[float, float]],
    delta: float,
    limit: int,
    eps: float | None = None,
) -> list[float]:
    """Positions chosen by the same greedy, truncated to the first ``limit``."""
    eps = resolve_eps(eps)
    out: list[float] = []
    for start, count, hi in _greedy_runs(feasible, delta, eps):
        for m in range(min(count, limit - len(out))):
            out.append(min(start + m * delta, hi))
        if len(out) >= limit:
            break
    return out


# ============== Decision ==============

def _host(length: float) -> Segment:
    return Segment(Point(0.0, 0.0), Point(length, 0.0))


def _square_feasible(local: Sequence[Point], length: float, s: float) -> FeasibleSet:
    host = _host(length)
    forbidden = (forbidden_interval_square(pt, s) for pt in local)
    return feasible_set(host, [iv for iv in forbidden if iv is not None])


def _disk_feasible(local: Sequence[Point], length: float, lam: float) -> FeasibleSet:
    host = _host(length)
    forbidden = (forbidden_interval_disk(pt, lam) for pt in local)
    return feasible_set(host, [iv for iv in forbidden if iv is not None])


def _count_squares_local(local: Sequence[Point], length: float, s: float, eps: float) -> int:
    return sum(math.floor((hi - lo) / s + eps) + 1 for lo, hi in _square_feasible(local, length, s))


def count_squares(points: Sequence[Point], segment: Segment, s: float, eps: float | None = None) -> int:
    """Maximum number of side-``s`` squares centered on the segment with no point strictly inside."""
    local, frame = normalize(points, segment)
    return _count_squares_local(local, frame.length, s, resolve_eps(eps))


def count_disks(
    points: Sequence[Point],
    segment: Segment,
    lam: float,
    alpha: float = 1.0,
    eps: float | None = None,
) -> int:
    """Maximum number of radius-``lam`` centers on the segment spaced at least ``lam / alpha`` apart."""
    local, frame = normalize(points, segment)
    count = count_on_feasible(_disk_feasible(local, frame.length, lam), lam / alpha, eps)
    logger.debug("count_disks  n=%d  lam=%.12g  alpha=%g  count=%d", len(local), lam, alpha, count)
    return count


# ============== Candidate Roots ==============

def candidate_root(
    left: EndpointFunc,
    right: EndpointFunc,
    t: int,
    alpha: float = 1.0,
    lam_max: float | None = None,
) -> float | None:
    """
    Positive root of ``right(lam) - left(lam) = t * lam / alpha``, or None.

    Without ``lam_max`` the bracket is grown by doubling.
    """
    lo = max(left.domain_lo, right.domain_lo)

    def f(lam: float) -> float:
        return right(lam) - left(lam) - t * lam / alpha

    f_lo = f(lo)
    if f_lo < 0.0 or (lo <= 0.0 and f_lo <= 0.0):
        return None
    if lam_max is None:
        hi = max(2.0 * lo, 1.0)
        for _ in range(128):
            if f(hi) <= 0.0:
                break
            hi *= 2.0
        else:
            return None
    else:
        hi = lam_max
        if hi <= lo or f(hi) > 0.0:
            return None
    root = bisect_decreasing(f, lo, hi)
    return root if root > 0.0 else None


def _pair_rows(
    lefts: Sequence[EndpointFunc],
    rights: Sequence[EndpointFunc],
    step,
    lo_bound: float,
    hi_bound: float,
    t_max: int,
) -> list[GapRow]:
    rows = []
    for left in lefts:
        for right in rights:
            lo = max(lo_bound, left.domain_lo, right.domain_lo)
            rows.append(
                GapRow(
                    gap=lambda lam, a=left, b=right: b(lam) - a(lam),
                    step=step,
                    lo=lo,
                    hi=hi_bound,
                    t_min=0,
                    t_max=t_max,
                )
            )
    return rows


def _check_line_instance(local: Sequence[Point], length: float, k: int) -> None:
    if k < 1:
        raise InvalidGeometryError(f"k must be at least 1, got {k}")
    if k >= 2 and length == 0.0:
        raise InfeasibleError(f"Degenerate segment cannot host k={k} centers")
    if not local and k == 1:
        raise UnboundedObjectiveError("No demand points and k=1: clearance is unbounded")


# ============== Optimization ==============

def solve_squares(points: Sequence[Point], segment: Segment, k: int) -> tuple[float, Placement]:
    """
    Largest square side ``s`` such that ``k`` squares fit, with a witness placement.

    Raises:
        InfeasibleError: no side admits ``k`` squares
        UnboundedObjectiveError: no demand points and ``k = 1``
    """
    local, frame = normalize(points, segment)
    length = frame.length
    _check_line_instance(local, length, k)
    eps = resolve_eps()

    def decide(s: float) -> bool:
        return _count_squares_local(local, length, s, eps) >= k

    s_max = 2.0 * (length + max((distance_to_host(pt, length) for pt in local), default=0.0)) + 1.0
    thresholds = sorted({2.0 * abs(pt.y) for pt in local if pt.y != 0.0})
    lo, hi = 0, len(thresholds)
    while lo < hi:
        mid = (lo + hi) // 2
        if decide(thresholds[mid]):
            lo = mid + 1
        else:
            hi = mid
    tau_a = thresholds[lo - 1] if lo > 0 else 0.0
    tau_b = thresholds[lo] if lo < len(thresholds) else s_max

    # points with 2|y| <= tau_a forbid throughout (tau_a, tau_b), the rest never do
    active = [(i, pt) for i, pt in enumerate(local) if 2.0 * abs(pt.y) <= tau_a]
    lefts = [EndpointFunc.constant(0.0)] + [EndpointFunc.right_of(pt, i, Shape.SQUARE) for i, pt in active]
    rights = [EndpointFunc.constant(length)] + [EndpointFunc.left_of(pt, i, Shape.SQUARE) for i, pt in active]
    rows = _pair_rows(lefts, rights, lambda s: s, tau_a, tau_b, k - 1)
    family = build_family(rows, [[tau_a]] if tau_a > 0.0 else [])

    stats = SearchStats()
    try:
        s_star = optimal_feasible(family, FeasibilityPredicate(decide, Direction.FEASIBLE_BELOW), stats)
    except NoFeasibleCandidateError as e:
        raise InfeasibleError(f"No square size admits k={k} squares") from e
    s_star = refine_optimum(decide, s_star, tau_b)

    centers = place_on_feasible(_square_feasible(local, length, s_star), s_star, k, eps)
    logger.info(
        "solve_squares done  n=%d  k=%d  s*=%.12g  bracket=[%.6g, %.6g)  calls=%d",
        len(local), k, s_star, tau_a, tau_b, stats.predicate_calls,
    )
    return s_star, Placement(tuple(centers), s_star, frame, Shape.SQUARE)


def solve_disks(
    points: Sequence[Point],
    segment: Segment,
    k: int,
    alpha: float = 1.0,
) -> tuple[float, Placement]:
    """
    Largest radius ``lam`` such that ``k`` centers fit with spacing ``lam / alpha``.

    Raises:
        InfeasibleError: no radius admits ``k`` centers
        UnboundedObjectiveError: no demand points and ``k = 1``
    """
    if not (math.isfinite(alpha) and alpha > 0):
        raise InvalidGeometryError(f"alpha must be positive, got {alpha}")
    local, frame = normalize(points, segment)
    length = frame.length
    _check_line_instance(local, length, k)
    eps = resolve_eps()

    def decide(lam: float) -> bool:
        return count_on_feasible(_disk_feasible(local, length, lam), lam / alpha, eps) >= k

    lam_max = (
        max(1.0, alpha) * length
        + max((distance_to_host(pt, length) for pt in local), default=0.0)
        + 1.0
    )
    lefts = [EndpointFunc.constant(0.0)] + [EndpointFunc.right_of(pt, i) for i, pt in enumerate(local)]
    rights = [EndpointFunc.constant(length)] + [EndpointFunc.left_of(pt, i) for i, pt in enumerate(local)]
    rows = _pair_rows(lefts, rights, lambda lam: lam / alpha, 0.0, lam_max, k - 1)
    family = build_family(rows)

    stats = SearchStats()
    try:
        lam_star = optimal_feasible(family, FeasibilityPredicate(decide, Direction.FEASIBLE_BELOW), stats)
    except NoFeasibleCandidateError as e:
        raise InfeasibleError(f"No radius admits k={k} centers") from e
    lam_star = refine_optimum(decide, lam_star, lam_max)

    centers = place_on_feasible(_disk_feasible(local, length, lam_star), lam_star / alpha, k, eps)
    logger.info(
        "solve_disks done  n=%d  k=%d  alpha=%g  lam*=%.12g  entries=%d  calls=%d",
        len(local), k, alpha, lam_star, family.total, stats.predicate_calls,
    )
    return lam_star, Placement(tuple(centers), lam_star, frame, Shape.DISK)


def validate_placement(
    points: Sequence[Point],
    segment: Segment,
    placement: Placement,
    alpha: float = 1.0,
    eps: float | None = None,
) -> bool:
    """Check spacing and clearance of ``placement`` against the original points."""
    eps = resolve_eps(eps)
    local, frame = normalize(points, segment)
    xs = placement.centers
    lam = placement.lam
    if any(x < -eps or x > frame.length + eps for x in xs):
        return False
    delta = lam if placement.shape is Shape.SQUARE else lam / alpha
    if any(b - a < delta - eps for a, b in zip(xs, xs[1:])):
        return False
    for pt in local:
        for x in xs:
            if placement.shape is Shape.SQUARE:
                if abs(pt.x - x) < lam / 2 - eps and abs(pt.y) < lam / 2 - eps:
                    return False
            elif math.hypot(pt.x - x, pt.y) < lam - eps:
                return False
    return True

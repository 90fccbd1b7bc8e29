"""
Brute-force reference solvers for small instances.

Nothing here calls into the solvers it checks; frames, forbidden regions and
searches are recomputed from the problem definitions. Enumeration is bounded
by an :class:`OracleBudget`.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .config import get_settings, resolve_eps
from .exceptions import BudgetExceededError, InfeasibleError, NoFeasiblePathError, UnboundedObjectiveError
from .geometry import CircleSpec, Point, Segment
from .logging_config import get_logger
from .solvers.mofl import KLinkResult, MoflGraph


logger = get_logger("dispersion.oracle")

BISECTION_STEPS = 100


@dataclass(frozen=True, slots=True)
class OracleBudget:
    max_n: int
    max_k: int
    max_nodes: int

    def __post_init__(self) -> None:
        if min(self.max_n, self.max_k, self.max_nodes) < 1:
            raise ValueError("Oracle budget limits must be positive")

    @classmethod
    def from_settings(cls) -> "OracleBudget":
        settings = get_settings()
        return cls(settings.oracle_max_n, settings.oracle_max_k, settings.oracle_max_nodes)

    def check_n(self, n: int) -> None:
        if n > self.max_n:
            raise BudgetExceededError("n", n, self.max_n)

    def check_k(self, k: int) -> None:
        if k > self.max_k:
            raise BudgetExceededError("k", k, self.max_k)


# ============== Line ==============

def _to_axis(points: Sequence[Point], segment: Segment) -> tuple[list[tuple[float, float]], float]:
    px, py = segment.p.x, segment.p.y
    dx, dy = segment.q.x - px, segment.q.y - py
    length = math.hypot(dx, dy)
    ux, uy = (dx / length, dy / length) if length > 0 else (1.0, 0.0)
    out = []
    for pt in points:
        rx, ry = pt.x - px, pt.y - py
        out.append((rx * ux + ry * uy, -rx * uy + ry * ux))
    return out, length


def _next_clear(t: float, blocks: Sequence[tuple[float, float]]) -> float:
    """Smallest position >= t outside every open block."""
    moved = True
    while moved:
        moved = False
        for lo, hi in blocks:
            if lo < t < hi:
                t = hi
                moved = True
    return t


def _anchored_run(start: float, end: float, delta: float, blocks: Sequence[tuple[float, float]], eps: float, cap: int) -> int:
    """Centers from ``start`` onward, each at the first clear spot ``delta`` after the last, up to ``end``."""
    count = 0
    x = _next_clear(start, blocks)
    while x <= end + eps and count < cap:
        count += 1
        x = _next_clear(x + delta, blocks)
    return count


def _line_anchors(blocks: Sequence[tuple[float, float]], length: float, delta: float, reps: int) -> list[float]:
    ends = [0.0] + [hi for _, hi in blocks if 0.0 <= hi <= length]
    anchors = set(ends)
    for e in ends:
        anchors.update(e + j * delta for j in range(1, reps + 1) if e + j * delta <= length)
    return sorted(anchors)


def _brute_line(
    blocks: list[tuple[float, float]],
    length: float,
    delta: float,
    budget: OracleBudget,
    eps: float,
    limit: int | None = None,
) -> int:
    cap = max(1, math.floor(length / delta + eps) + 1)
    if limit is not None:
        cap = min(cap, limit)
    best = 0
    for anchor in _line_anchors(blocks, length, delta, budget.max_k):
        if any(lo < anchor < hi for lo, hi in blocks):
            continue
        best = max(best, _anchored_run(anchor, length, delta, blocks, eps, cap))
        if best >= cap:
            break
    return best


def brute_count_line(
    points: Sequence[Point],
    segment: Segment,
    lam: float,
    alpha: float = 1.0,
    budget: OracleBudget | None = None,
    eps: float | None = None,
    limit: int | None = None,
) -> int:
    """
    Most disk centers on the segment, trying every anchor for the first and greedy for the rest.

    With ``limit`` the count stops there.
    """
    budget = budget or OracleBudget.from_settings()
    budget.check_n(len(points))
    eps = resolve_eps(eps)
    local, length = _to_axis(points, segment)
    blocks = []
    for x, y in local:
        if abs(y) < lam:
            h = math.sqrt(lam * lam - y * y)
            if h > 0:
                blocks.append((x - h, x + h))
    return _brute_line(blocks, length, lam / alpha, budget, eps, limit)


def brute_count_squares(
    points: Sequence[Point],
    segment: Segment,
    s: float,
    budget: OracleBudget | None = None,
    eps: float | None = None,
    limit: int | None = None,
) -> int:
    """Most side-``s`` squares on the segment with no point strictly inside any of them, capped at ``limit``."""
    budget = budget or OracleBudget.from_settings()
    budget.check_n(len(points))
    eps = resolve_eps(eps)
    local, length = _to_axis(points, segment)
    blocks = [(x - s / 2, x + s / 2) for x, y in local if abs(y) < s / 2]
    return _brute_line(blocks, length, s, budget, eps, limit)


def _bisect_max(decide, hi: float) -> float:
    lo = 0.0
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if decide(mid):
            lo = mid
        else:
            hi = mid
    return lo


def brute_solve_line(
    points: Sequence[Point],
    segment: Segment,
    k: int,
    alpha: float = 1.0,
    squares: bool = False,
    budget: OracleBudget | None = None,
) -> float:
    """Largest radius (or square side) that still admits ``k`` centers, by bisection on the brute count."""
    budget = budget or OracleBudget.from_settings()
    budget.check_k(k)
    if not points and k == 1:
        raise UnboundedObjectiveError()
    local, length = _to_axis(points, segment)
    far = max((math.hypot(max(0.0, -x, x - length), y) for x, y in local), default=0.0)

    if squares:
        hi = 2.0 * (length + far) + 1.0

        def decide(v: float) -> bool:
            return brute_count_squares(points, segment, v, budget, limit=k) >= k
    else:
        hi = max(1.0, alpha) * length + far + 1.0

        def decide(v: float) -> bool:
            return brute_count_line(points, segment, v, alpha, budget, limit=k) >= k

    if not decide(hi * 1e-12):
        raise InfeasibleError(f"No parameter admits k={k}")
    return _bisect_max(decide, hi)


# ============== Circle ==============

def brute_count_circle(
    points: Sequence[Point],
    circle: CircleSpec,
    lam: float,
    alpha: float = 1.0,
    starts: int = 16,
    budget: OracleBudget | None = None,
    eps: float | None = None,
    limit: int | None = None,
) -> int:
    """Best anchored greedy over cuts at every forbidden endpoint and ``starts`` even rotations, capped at ``limit``."""
    budget = budget or OracleBudget.from_settings()
    budget.check_n(len(points))
    eps = resolve_eps(eps)
    r = circle.radius
    cx, cy = circle.center.x, circle.center.y

    arcs = []
    for pt in points:
        d = math.hypot(pt.x - cx, pt.y - cy)
        if d == 0.0:
            if lam > r:
                return 0
            continue
        if lam >= d + r:
            return 0
        if lam <= abs(d - r):
            continue
        half = math.acos(max(-1.0, min(1.0, (r * r + d * d - lam * lam) / (2 * r * d))))
        arcs.append((math.atan2(pt.y - cy, pt.x - cx), half))

    def blocked(angle: float) -> bool:
        for mid, half in arcs:
            off = (angle - mid) % (2 * math.pi)
            if off < half or off > 2 * math.pi - half:
                return True
        return False

    anchors = [2 * math.pi * i / starts for i in range(max(starts, 1))]
    for mid, half in arcs:
        anchors.extend((mid + half, mid - half))
    anchors = [a % (2 * math.pi) for a in anchors]
    clear = [a for a in anchors if not blocked(a)]
    if not clear:
        return 0

    delta = lam / alpha
    if delta > 2 * r + eps:
        return 1
    theta = 2 * math.asin(min(1.0, delta / (2 * r)))

    best = 0
    for a in clear:
        # unroll two laps of blocks around the anchor
        blocks = []
        for mid, half in arcs:
            lo = a + ((mid - half - a) % (2 * math.pi))
            for lap in (-2 * math.pi, 0.0, 2 * math.pi):
                blocks.append((lo + lap, lo + lap + 2 * half))
        cap = math.floor(2 * math.pi / theta + eps)
        if limit is not None:
            cap = min(cap, limit)
        best = max(best, _anchored_run(a, a + 2 * math.pi - theta, theta, blocks, eps, cap))
        if best >= cap:
            break
    return best


def brute_solve_circle(
    points: Sequence[Point],
    circle: CircleSpec,
    k: int,
    alpha: float = 1.0,
    budget: OracleBudget | None = None,
) -> float:
    """Largest clearance that still admits ``k`` centers on the circle, by bisection on the brute count."""
    budget = budget or OracleBudget.from_settings()
    budget.check_k(k)
    if not points and k == 1:
        raise UnboundedObjectiveError()
    r = circle.radius
    far = max((math.hypot(pt.x - circle.center.x, pt.y - circle.center.y) + r for pt in points), default=0.0)
    hi = max(2.0 * alpha * r, far) * (1.0 + 1e-6)

    def decide(v: float) -> bool:
        return brute_count_circle(points, circle, v, alpha, budget=budget, limit=k) >= k

    if not decide(hi * 1e-12):
        raise InfeasibleError(f"No clearance admits k={k}")
    return _bisect_max(decide, hi)


# ============== MOFL ==============

def brute_mofl(graph: MoflGraph, k: int, budget: OracleBudget | None = None, eps: float | None = None) -> KLinkResult:
    """
    Enumerate every ``k``-subset of candidate positions that respects the separation.

    Coverage is recomputed from the points when the graph carries them, from
    the open influence intervals otherwise.
    """
    budget = budget or OracleBudget.from_settings()
    eps = resolve_eps(eps)
    inner = [float(p) for p in graph.positions[1:-1]]
    subsets = math.comb(len(inner), k)
    if subsets > budget.max_nodes:
        raise BudgetExceededError("subsets", subsets, budget.max_nodes)

    if graph.points and graph.lam is not None:
        lam = graph.lam
        targets = [(pt, 1.0 if pt.weight is None else pt.weight) for pt in graph.points]

        def covered(centers: Sequence[float]) -> float:
            return sum(w for pt, w in targets if any(math.hypot(pt.x - c, pt.y) < lam - eps for c in centers))
    else:
        def covered(centers: Sequence[float]) -> float:
            return sum(iv.weight for iv in graph.intervals if any(iv.lo < c < iv.hi for c in centers))

    total = sum(iv.weight for iv in graph.intervals)
    best: tuple[float, tuple[int, ...]] | None = None
    for combo in itertools.combinations(range(len(inner)), k):
        xs = [inner[i] for i in combo]
        if any(b - a < graph.sep - eps for a, b in zip(xs, xs[1:])):
            continue
        value = covered(xs)
        if best is None or value < best[0]:
            best = (value, combo)
    if best is None:
        raise NoFeasiblePathError(f"No {k} candidates respect separation {graph.sep:g}")

    value, combo = best
    path = (0,) + tuple(i + 1 for i in combo) + (graph.size - 1,)
    logger.debug("brute_mofl  positions=%d  k=%d  subsets=%d  covered=%g", len(inner), k, subsets, value)
    return KLinkResult(cost=value - total, path=path, covered_weight=value)

"""
Decision and optimization solvers for facilities on the boundary of a circle.

Separations are chords; the ring arithmetic runs on angles with the angular
step ``theta = 2 * asin(min(1, delta / (2 r)))`` for chord spacing ``delta``.

The decision procedure distinguishes four cases:

- ``delta > 2r``: at most one center fits.
- No forbidden arcs: ``floor(2 pi / theta)`` centers.
- Some merged forbidden arc at least ``theta`` wide: cut the ring at its right
  end and run the line greedy; the arc itself pays for the closing gap.
- Otherwise: map arc endpoints to residues modulo ``theta``, compute for every
  right endpoint the next arc its step sequence falls into (with a persistent
  segment tree over residues), lift those jumps by doubling, and simulate one
  lap from every anchor.
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..config import resolve_eps
from ..exceptions import (
    InfeasibleError,
    InvalidGeometryError,
    ModelInvariantViolation,
    NoFeasibleCandidateError,
    UnboundedObjectiveError,
)
from ..geometry import TWO_PI, CircleSpec, Point, forbidden_arc, merge_ring_arcs
from ..logging_config import get_logger
from ..matrix_search import Direction, FeasibilityPredicate, SearchStats, optimal_feasible
from ..pst import PersistentSegmentTree
from .candidates import GapRow, build_family, refine_optimum
from .line import count_on_feasible, place_on_feasible


logger = get_logger("dispersion.circle")


# ============== Domain Types ==============

@dataclass(frozen=True, slots=True)
class CircInstance:
    points: tuple[Point, ...]
    circle: CircleSpec
    k: int
    alpha: float = 1.0

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InvalidGeometryError(f"k must be at least 1, got {self.k}")
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise InvalidGeometryError(f"alpha must be positive, got {self.alpha}")


@dataclass(frozen=True)
class RingModel:
    """
    Merged forbidden arcs on a ring, sorted by start, with the angular step.

    Arc ``i`` of the doubled index space ``0..2n-1`` is arc ``i mod n`` shifted
    by ``i // n`` laps.
    """

    circumference: float
    step: float
    arcs: tuple[tuple[float, float], ...]

    @property
    def n(self) -> int:
        return len(self.arcs)

    @property
    def origin(self) -> float:
        return self.arcs[0][0]

    def left(self, i: int) -> float:
        return self.arcs[i % self.n][0] + (i // self.n) * self.circumference

    def right(self, i: int) -> float:
        return self.arcs[i % self.n][1] + (i // self.n) * self.circumference

    def residue(self, x: float) -> float:
        r = (x - self.origin) % self.step
        return 0.0 if r >= self.step else r

    def mirrored(self) -> "RingModel":
        """The same ring traversed in the opposite direction."""
        c = self.circumference
        flipped = []
        for lo, hi in self.arcs:
            start = (c - hi) % c
            flipped.append((start, start + (hi - lo)))
        return RingModel(c, self.step, tuple(sorted(flipped)))


@dataclass(frozen=True)
class JumpTables:
    """``jump[i, j]``: arc reached after 2**j jumps from arc i; ``centers[i, j]``: centers placed meanwhile."""

    jump: np.ndarray
    centers: np.ndarray

    @property
    def levels(self) -> int:
        return int(self.jump.shape[1])

    @property
    def sentinel(self) -> int:
        return int(self.jump.shape[0]) - 1


# ============== Jump Tables ==============

def build_jump_tables(model: RingModel, k: int | None = None) -> JumpTables:
    """
    Jump tables over the doubled arc sequence of ``model``.

    ``k`` bounds the number of doubling levels; without it the tables are
    exact for a full lap.

    Raises:
        ModelInvariantViolation: no arcs, or an arc at least one step wide
    """
    n = model.n
    if n == 0:
        raise ModelInvariantViolation("Jump tables need at least one forbidden arc")
    for lo, hi in model.arcs:
        if hi - lo >= model.step:
            raise ModelInvariantViolation(
                f"Arc ({lo:.12g}, {hi:.12g}) is not narrower than the step {model.step:.12g}"
            )

    size = 2 * n
    levels = max(1, min(size, k if k is not None else size).bit_length())
    eps = resolve_eps()

    lefts = [model.left(i) for i in range(size)]
    rights = [model.right(i) for i in range(size)]
    res_l = [model.residue(x) for x in lefts]
    res_r = [model.residue(x) for x in rights]
    coords = sorted(set(res_l) | set(res_r))
    rank = {v: pos + 1 for pos, v in enumerate(coords)}
    m = len(coords)

    # version[j]: stabbing counts after the residue intervals of arcs 0..j
    tree = PersistentSegmentTree(m)
    version: list[int] = []
    for j in range(size):
        a, b = rank[res_l[j]], rank[res_r[j]]
        if res_l[j] < res_r[j]:
            ranges = [(a + 1, b - 1)]
        else:
            ranges = [(a + 1, m), (1, b - 1)]
        for lo, hi in ranges:
            if lo <= hi:
                tree.add(lo, hi)
        version.append(tree.versions)

    jump = np.full((size + 1, levels), size, dtype=np.int64)
    centers = np.zeros((size + 1, levels), dtype=np.int64)
    for i in range(size):
        q = rank[res_r[i]]
        base = tree.query(q, version[i])
        if tree.query(q, version[size - 1]) == base:
            continue
        lo, hi = i + 1, size - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if tree.query(q, version[mid]) > base:
                hi = mid
            else:
                lo = mid + 1
        jump[i, 0] = lo
        centers[i, 0] = math.floor((lefts[lo] - rights[i]) / model.step + eps) + 1

    for j in range(1, levels):
        prev = jump[:, j - 1]
        jump[:, j] = jump[prev, j - 1]
        centers[:, j] = centers[:, j - 1] + centers[prev, j - 1]

    logger.debug(
        "Jump tables built  arcs=%d  levels=%d  residues=%d  tree_nodes=%d",
        n, levels, m, tree.node_count,
    )
    return JumpTables(jump=jump, centers=centers)


def cal(start: int, tables: JumpTables, k: int | None, model: RingModel) -> int:
    """
    Centers placed in one lap when the first sits on the right end of arc ``start``.

    The last center keeps at least one step to the anchor's next-lap copy.
    With ``k`` the result is capped at ``k``.
    """
    eps = resolve_eps()
    target = start + model.n
    x = start
    count = 0
    for j in reversed(range(tables.levels)):
        dest = int(tables.jump[x, j])
        if dest <= target:
            count += int(tables.centers[x, j])
            x = dest
    if x != target:
        count += math.floor((model.right(target) - model.right(x)) / model.step + eps)
    return count if k is None else min(k, count)


# ============== Decision ==============

def _merged_arcs(points: Sequence[Point], circle: CircleSpec, lam: float) -> list[tuple[float, float]] | None:
    arcs = (forbidden_arc(pt, circle, lam) for pt in points)
    return merge_ring_arcs([a for a in arcs if a is not None], TWO_PI)


def angular_step(lam: float, alpha: float, radius: float) -> float:
    """Angle subtending a chord of ``lam / alpha``, saturating at pi."""
    return 2.0 * math.asin(min(1.0, lam / (alpha * 2.0 * radius)))


def _pieces_from(arcs: Sequence[tuple[float, float]], s: int, circumference: float) -> list[tuple[float, float]]:
    """Feasible stretches of one lap starting at the right end of arc ``s``."""
    n = len(arcs)
    out = []
    cursor = arcs[s][1]
    for m in range(1, n + 1):
        idx = s + m
        lo = arcs[idx % n][0] + (idx // n) * circumference
        out.append((cursor, lo))
        cursor = arcs[idx % n][1] + (idx // n) * circumference
    return out


def count_on_ring(
    arcs: Sequence[tuple[float, float]] | None,
    step: float,
    circumference: float = TWO_PI,
    cap: int | None = None,
    eps: float | None = None,
) -> int:
    """Maximum number of positions on a ring, ``step`` apart cyclically, outside merged open ``arcs``."""
    eps = resolve_eps(eps)
    if arcs is None:
        return 0
    if not arcs:
        count = math.floor(circumference / step + eps)
    else:
        widths = [hi - lo for lo, hi in arcs]
        widest = max(range(len(arcs)), key=widths.__getitem__)
        if widths[widest] >= step - eps:
            count = count_on_feasible(_pieces_from(arcs, widest, circumference), step, eps)
        else:
            forward = RingModel(circumference, step, tuple(arcs))
            count = 0
            for view in (forward, forward.mirrored()):
                tables = build_jump_tables(view, cap)
                count = max(count, max(cal(s, tables, cap, view) for s in range(view.n)))
    return count if cap is None else min(cap, count)


def count_circle(
    points: Sequence[Point],
    circle: CircleSpec,
    lam: float,
    alpha: float = 1.0,
    cap: int | None = None,
    eps: float | None = None,
) -> int:
    """Maximum number of centers on the circle with clearance ``lam`` and chord spacing ``lam / alpha``."""
    eps = resolve_eps(eps)
    merged = _merged_arcs(points, circle, lam)
    if merged is None:
        count = 0
    elif lam / alpha > 2.0 * circle.radius + eps:
        count = 1
    else:
        count = count_on_ring(merged, angular_step(lam, alpha, circle.radius), TWO_PI, cap, eps)
    if cap is not None:
        count = min(cap, count)
    logger.debug("count_circle  n=%d  lam=%.12g  alpha=%g  count=%d", len(points), lam, alpha, count)
    return count


# ============== Witness ==============

def place_on_ring(
    arcs: Sequence[tuple[float, float]] | None,
    step: float,
    k: int,
    circumference: float = TWO_PI,
    eps: float | None = None,
) -> list[float]:
    """
    ``k`` ring positions ``step`` apart cyclically, avoiding ``arcs``.

    Tries every right-end anchor in both directions and keeps the first that
    reaches ``k``.

    Raises:
        ModelInvariantViolation: no anchor reaches ``k``
    """
    eps = resolve_eps(eps)
    if arcs is None:
        raise ModelInvariantViolation("The whole ring is forbidden")
    if not arcs:
        if k > math.floor(circumference / step + eps):
            raise ModelInvariantViolation(f"An empty ring holds fewer than {k} positions")
        return [m * step for m in range(k)]

    forward = RingModel(circumference, step, tuple(arcs))
    for model, flip in ((forward, False), (forward.mirrored(), True)):
        for s in range(model.n):
            anchor = model.right(s)
            limit = anchor + circumference - step
            pieces = [(lo, min(hi, limit)) for lo, hi in _pieces_from(model.arcs, s, circumference) if lo <= limit + eps]
            positions = place_on_feasible(pieces, step, k, eps)
            if len(positions) >= k:
                angles = [p % circumference for p in positions]
                return [(circumference - a) % circumference for a in angles] if flip else angles
    raise ModelInvariantViolation(f"No anchor places {k} positions")


# ============== Optimization ==============

def _antipodal_optimum(
    points: Sequence[Point],
    circle: CircleSpec,
    eps: float,
) -> tuple[float, tuple[float, float]] | None:
    """
    Single-center optimum ``d + r`` of the point nearest the center, if its antipode is clear.

    Only the antipode reaches that distance and the full-arc rule forbids it at
    equality, so this value is a supremum no decision call confirms.
    """
    nearest = min(points, key=lambda pt: pt.distance(circle.center.x, circle.center.y))
    d = nearest.distance(circle.center.x, circle.center.y)
    if d == 0.0:
        return None
    lam = d + circle.radius
    where = circle.point_at(circle.angle_of(nearest) + math.pi)
    if any(pt.distance(*where) < lam - eps for pt in points):
        return None
    return lam, where


def solve_circle(
    points: Sequence[Point],
    circle: CircleSpec,
    k: int,
    alpha: float = 1.0,
) -> tuple[float, list[tuple[float, float]]]:
    """
    Largest clearance ``lam`` such that ``k`` centers fit on the circle.

    Returns the optimum and the centers in world coordinates. For ``k = 1`` the
    optimum may be a full-arc threshold, which ``count_circle`` reports as 0.

    Raises:
        InfeasibleError: no clearance admits ``k`` centers
        UnboundedObjectiveError: no demand points and ``k = 1``
    """
    CircInstance(tuple(points), circle, k, alpha)
    if not points and k == 1:
        raise UnboundedObjectiveError("No demand points and k=1: clearance is unbounded")
    if k == 1:
        antipodal = _antipodal_optimum(points, circle, resolve_eps())
        if antipodal is not None:
            lam_star, where = antipodal
            logger.info("solve_circle done  n=%d  k=1  lam*=%.12g  antipodal", len(points), lam_star)
            return lam_star, [where]
    r = circle.radius
    diameter = 2.0 * alpha * r

    def decide(lam: float) -> bool:
        return count_circle(points, circle, lam, alpha, cap=k) >= k

    def theta(lam: float) -> float:
        return angular_step(lam, alpha, r)

    located = []
    for pt in points:
        d = pt.distance(circle.center.x, circle.center.y)
        if d > 0.0:
            located.append((circle.angle_of(pt), d))

    def half_width(d: float):
        def phi(lam: float) -> float:
            c = (r * r + d * d - lam * lam) / (2.0 * r * d)
            return math.acos(max(-1.0, min(1.0, c)))
        return phi

    rows = []
    for i, (mid_i, d_i) in enumerate(located):
        phi_i = half_width(d_i)
        for j, (mid_j, d_j) in enumerate(located):
            phi_j = half_width(d_j)
            base = TWO_PI if i == j else (mid_j - mid_i) % TWO_PI
            rows.append(
                GapRow(
                    gap=lambda lam, b=base, f=phi_i, g=phi_j: b - f(lam) - g(lam),
                    step=theta,
                    lo=max(abs(d_i - r), abs(d_j - r)),
                    hi=min(d_i + r, d_j + r),
                    t_min=0,
                    t_max=k,
                )
            )
    chains = [diameter * math.sin(math.pi / t) for t in range(2, k + 1)]
    full_arc = sorted((pt.distance(circle.center.x, circle.center.y) + r for pt in points), reverse=True)
    family = build_family(rows, [chains, [diameter], full_arc])

    stats = SearchStats()
    try:
        lam_star = optimal_feasible(family, FeasibilityPredicate(decide, Direction.FEASIBLE_BELOW), stats)
    except NoFeasibleCandidateError as e:
        raise InfeasibleError(f"No clearance admits k={k} centers on the circle") from e
    upper = max([diameter] + full_arc) * (1.0 + 1e-6)
    lam_star = refine_optimum(decide, lam_star, upper)

    merged = _merged_arcs(points, circle, lam_star)
    if lam_star / alpha > 2.0 * r + resolve_eps():
        angles = place_on_ring(merged, math.pi, 1)
    else:
        angles = place_on_ring(merged, theta(lam_star), k)
    logger.info(
        "solve_circle done  n=%d  k=%d  alpha=%g  lam*=%.12g  entries=%d  calls=%d",
        len(points), k, alpha, lam_star, family.total, stats.predicate_calls,
    )
    return lam_star, [circle.point_at(a) for a in angles]

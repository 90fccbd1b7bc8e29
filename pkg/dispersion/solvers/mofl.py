"""
Min-sum coverage: place k centers on a segment, pairwise at least ``alpha * lam``
apart, so that the total weight of demand points within distance ``lam`` of
some center is minimal.

The instance becomes a DAG over sorted candidate positions framed by two
sentinels. An edge ``(x, y)`` carries minus the weight of the influence
intervals lying between its endpoints (those are avoided when no center sits
in between); edges between centers closer than the separation are absent. The
answer is the cheapest path from the first to the last sentinel with exactly
``k + 1`` links.

Edge weights are convex Monge on the allowed region, so the engine shifts
every edge by an integer ``tau`` and searches for the shift at which an
unconstrained shortest path uses ``k + 1`` links. Each unconstrained path is
computed online by divide and conquer over node ranges, solving the allowed
staircase of each cross step as rectangles with monotone row minima.
"""

import bisect
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..config import resolve_eps
from ..exceptions import (
    IndexOutOfRangeError,
    InfeasibleError,
    InvalidEdgeError,
    InvalidGeometryError,
    NoFeasiblePathError,
)
from ..geometry import Point, Segment, SegmentFrame, normalize
from ..logging_config import get_logger
from ..pst import PersistentSegmentTree


logger = get_logger("dispersion.mofl")

DEDUP_TOL = 1e-12


# ============== Domain Types ==============

@dataclass(frozen=True, slots=True)
class MoflInstance:
    points: tuple[Point, ...]
    segment: Segment
    k: int
    lam: float
    alpha: float = 1.0

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InvalidGeometryError(f"k must be at least 1, got {self.k}")
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise InvalidGeometryError(f"lambda must be positive, got {self.lam}")
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise InvalidGeometryError(f"alpha must be positive, got {self.alpha}")
        for i, pt in enumerate(self.points):
            if pt.weight is None:
                raise InvalidGeometryError(f"points[{i}] has no weight")

    @property
    def sep(self) -> float:
        return self.alpha * self.lam


@dataclass(frozen=True, slots=True)
class InfluenceInterval:
    """Open interval of center positions that cover point ``owner``."""

    lo: float
    hi: float
    weight: float
    owner: int


@dataclass(frozen=True)
class KLinkResult:
    cost: float
    path: tuple[int, ...]
    covered_weight: float


@dataclass
class MoflGraph:
    """
    Candidate positions framed by sentinels, with containment-weight queries.

    ``points`` and ``lam`` are kept when the graph comes from an instance so
    that coverage can be recomputed geometrically.
    """

    positions: np.ndarray
    intervals: tuple[InfluenceInterval, ...]
    sep: float
    eps: float
    points: tuple[Point, ...] = ()
    lam: float | None = None
    _tree: PersistentSegmentTree | None = field(default=None, repr=False)
    _los_sorted: list[float] = field(default_factory=list, repr=False)
    _lo: np.ndarray = field(default=None, repr=False)  # type: ignore[assignment]
    _hi: np.ndarray = field(default=None, repr=False)  # type: ignore[assignment]
    _w: np.ndarray = field(default=None, repr=False)  # type: ignore[assignment]

    @property
    def size(self) -> int:
        return int(self.positions.shape[0])

    @property
    def total_weight(self) -> float:
        return float(sum(iv.weight for iv in self.intervals))

    @property
    def integral(self) -> bool:
        return all(float(iv.weight).is_integer() for iv in self.intervals)

    def is_internal(self, x: int) -> bool:
        return 0 < x < self.size - 1

    def contained_weight(self, x: int, y: int) -> float:
        """Weight of intervals with ``lo >= pos[x]`` and ``hi <= pos[y]``."""
        px = float(self.positions[x])
        if self._tree is not None:
            version = len(self._los_sorted) - bisect.bisect_left(self._los_sorted, px)
            return self._tree.query(y + 1, version)
        mask = (self._lo >= px) & (self._hi <= float(self.positions[y]))
        return float(self._w[mask].sum())

    def forbidden(self, x: int, y: int) -> bool:
        return (
            self.is_internal(x)
            and self.is_internal(y)
            and float(self.positions[y] - self.positions[x]) < self.sep - self.eps
        )

    def last_allowed(self) -> np.ndarray:
        """Per node ``y``, the largest ``x < y`` with an allowed edge; allowed ``x`` form the prefix ``0..a[y]``."""
        v = self.size
        pos = self.positions
        reach = np.searchsorted(pos, pos - self.sep + self.eps, side="right") - 1
        upto = np.minimum(np.maximum(reach, 0), np.arange(v) - 1)
        upto[v - 1] = v - 2
        upto[0] = -1
        return upto

    def weight_matrix(self) -> np.ndarray:
        """Dense edge weights; ``inf`` for ``x >= y`` and for forbidden pairs."""
        pos = self.positions
        v = self.size
        if self.intervals:
            before = (self._lo[None, :] >= pos[:, None]).astype(float)
            after = (self._hi[:, None] <= pos[None, :]) * self._w[:, None]
            matrix = -(before @ after)
        else:
            matrix = np.zeros((v, v))
        matrix[np.tril_indices(v)] = np.inf
        internal = np.zeros(v, dtype=bool)
        internal[1:-1] = True
        close = (pos[None, :] - pos[:, None]) < self.sep - self.eps
        matrix[close & internal[:, None] & internal[None, :]] = np.inf
        return matrix


# ============== Construction ==============

def influence_intervals(points: Sequence[Point], lam: float) -> list[InfluenceInterval]:
    """Per point on the x-axis frame, the open set of center positions that cover it."""
    if not (math.isfinite(lam) and lam > 0):
        raise InvalidGeometryError(f"lambda must be positive, got {lam}")
    out = []
    for i, pt in enumerate(points):
        if abs(pt.y) >= lam:
            continue
        h = math.sqrt(lam * lam - pt.y * pt.y)
        if h == 0.0:
            continue
        out.append(InfluenceInterval(pt.x - h, pt.x + h, 1.0 if pt.weight is None else pt.weight, i))
    return out


def candidate_positions(
    intervals: Sequence[InfluenceInterval],
    segment: Segment,
    k: int,
    sep: float,
) -> list[float]:
    """
    Positions that some optimal placement uses.

    Every interval endpoint and segment endpoint, plus chains of up to ``k - 1``
    separations after each, kept within the segment and deduplicated.
    """
    if not (math.isfinite(sep) and sep > 0):
        raise InvalidGeometryError(f"separation must be positive, got {sep}")
    p, q = segment.p.x, segment.q.x
    base = {p, q}
    for iv in intervals:
        base.update((iv.lo, iv.hi))
    tagged = [(b, 0) for b in base]
    for b in base:
        tagged.extend((b + j * sep, 1) for j in range(1, k))

    out: list[float] = []
    cluster_is_base = False
    for value, aug in sorted(t for t in tagged if p <= t[0] <= q):
        if out and value - out[-1] <= DEDUP_TOL * max(1.0, abs(value)):
            if aug == 0 and not cluster_is_base:
                out[-1] = value
                cluster_is_base = True
            continue
        out.append(value)
        cluster_is_base = aug == 0
    return out


def build_graph(
    intervals: Sequence[InfluenceInterval],
    positions: Sequence[float],
    sep: float,
    points: Sequence[Point] = (),
    lam: float | None = None,
    eps: float | None = None,
) -> MoflGraph:
    """Frame ``positions`` with sentinels outside every interval and index the containment weights."""
    eps = resolve_eps(eps)
    ivs = tuple(intervals)
    inner = sorted(positions)
    lo_all = min([iv.lo for iv in ivs] + inner[:1], default=0.0)
    hi_all = max([iv.hi for iv in ivs] + inner[-1:], default=0.0)
    pos = np.array([lo_all - 1.0] + inner + [hi_all + 1.0], dtype=float)

    graph = MoflGraph(
        positions=pos,
        intervals=ivs,
        sep=sep,
        eps=eps,
        points=tuple(points),
        lam=lam,
        _lo=np.array([iv.lo for iv in ivs], dtype=float),
        _hi=np.array([iv.hi for iv in ivs], dtype=float),
        _w=np.array([iv.weight for iv in ivs], dtype=float),
    )
    if ivs and graph.integral:
        tree = PersistentSegmentTree(graph.size)
        for iv in sorted(ivs, key=lambda iv: -iv.lo):
            first = int(np.searchsorted(pos, iv.hi, side="left"))
            tree.add(first + 1, graph.size, int(iv.weight))
        graph._tree = tree
        graph._los_sorted = sorted(iv.lo for iv in ivs)
    logger.debug("MOFL graph built  intervals=%d  nodes=%d  sep=%g", len(ivs), graph.size, sep)
    return graph


def edge_weight(graph: MoflGraph, x: int, y: int) -> float:
    """
    Minus the weight avoided between nodes ``x`` and ``y``, or ``inf`` if both are centers too close together.

    Raises:
        InvalidEdgeError: ``x >= y``
        IndexOutOfRangeError: node outside the graph
    """
    if x >= y:
        raise InvalidEdgeError(x, y)
    if x < 0 or y >= graph.size:
        raise IndexOutOfRangeError(f"Edge ({x}, {y}) outside 0..{graph.size - 1}")
    if graph.forbidden(x, y):
        return math.inf
    return -graph.contained_weight(x, y)


def monge_check(graph: MoflGraph, matrix: np.ndarray | None = None) -> tuple[int, int] | None:
    """
    First ``(i, j)`` where ``w(i,j) + w(i+1,j+1) >= w(i,j+1) + w(i+1,j)`` fails on finite entries.
    """
    m = graph.weight_matrix() if matrix is None else matrix
    a, d = m[:-1, :-1], m[1:, 1:]
    b, c = m[:-1, 1:], m[1:, :-1]
    finite = np.isfinite(a) & np.isfinite(b) & np.isfinite(c) & np.isfinite(d)
    with np.errstate(invalid="ignore"):
        slack = a + d - b - c
    tol = graph.eps * max(1.0, graph.total_weight)
    bad = np.argwhere(finite & (slack < -tol))
    if bad.size == 0:
        return None
    i, j = bad[0]
    return int(i), int(j)


# ============== Engines ==============

def _path_result(graph: MoflGraph, path: Sequence[int]) -> KLinkResult:
    cost = sum(edge_weight(graph, x, y) for x, y in zip(path, path[1:]))
    return KLinkResult(cost=float(cost), path=tuple(path), covered_weight=graph.total_weight + cost)


def dp_baseline(graph: MoflGraph, k: int) -> KLinkResult:
    """
    Exact layered DP over (node, links used).

    Raises:
        NoFeasiblePathError: every (k+1)-link path uses a forbidden edge
    """
    links = k + 1
    v = graph.size
    matrix = graph.weight_matrix()
    dist = np.full(v, np.inf)
    dist[0] = 0.0
    pred = np.zeros((links + 1, v), dtype=np.int64)
    cols = np.arange(v)
    for layer in range(1, links + 1):
        cand = dist[:, None] + matrix
        arg = np.argmin(cand, axis=0)
        pred[layer] = arg
        dist = cand[arg, cols]
    if not np.isfinite(dist[v - 1]):
        raise NoFeasiblePathError(f"No {links}-link path respects separation {graph.sep:g}")

    path = [v - 1]
    for layer in range(links, 0, -1):
        path.append(int(pred[layer, path[-1]]))
    path.reverse()
    return _path_result(graph, path)


class _LagrangianEngine:
    """Unconstrained shortest paths of the shifted graph with exact link-count tie-breaking."""

    def __init__(self, graph: MoflGraph):
        self.graph = graph
        self.size = graph.size
        self.base = self.size + 2
        self.upto = [int(a) for a in graph.last_allowed()]

    def weight(self, x: int, y: int) -> int:
        return -int(round(self.graph.contained_weight(x, y)))

    def shortest(self, tau: int, sign: int) -> list:
        """Per node, min over paths from node 0 of ``sum((w + tau) * B + sign)``."""
        v, base, upto = self.size, self.base, self.upto
        dist: list = [math.inf] * v
        dist[0] = 0
        weight = self.weight

        def rect(ylo: int, yhi: int, xlo: int, xhi: int) -> None:
            if ylo > yhi:
                return
            ym = (ylo + yhi) // 2
            best, arg = math.inf, xlo
            for x in range(xlo, xhi + 1):
                val = dist[x] + (weight(x, ym) + tau) * base + sign
                if val < best:
                    best, arg = val, x
            if best < dist[ym]:
                dist[ym] = best
            rect(ylo, ym - 1, arg, xhi)
            rect(ym + 1, yhi, xlo, arg)

        def stair(ya: int, yb: int, xlo: int, xmax: int) -> None:
            if ya > yb:
                return
            ym = (ya + yb) // 2
            bm = min(xmax, upto[ym])
            if bm >= xlo:
                rect(ym, yb, xlo, bm)
                stair(ya, ym - 1, xlo, xmax)
                stair(ym + 1, yb, bm + 1, xmax)
            else:
                stair(ym + 1, yb, xlo, xmax)

        def solve(lo: int, hi: int) -> None:
            if lo == hi:
                return
            mid = (lo + hi) // 2
            solve(lo, mid)
            stair(mid + 1, hi, lo, mid)
            solve(mid + 1, hi)

        solve(0, v - 1)
        return dist

    def profile(self, tau: int) -> tuple[list[int], list[int], list[int]]:
        """Shifted cost, fewest links and most links of an optimal path to every node."""
        base = self.base
        fewer = self.shortest(tau, 1)
        more = self.shortest(tau, -1)
        lmin = [int(f) % base for f in fewer]
        lmax = [int(-m) % base for m in more]
        cost = [(int(f) - l) // base for f, l in zip(fewer, lmin)]
        return cost, lmin, lmax

    def walk(self, tau: int, links: int, cost: list[int], lmin: list[int], lmax: list[int]) -> list[int] | None:
        """Optimal path with exactly ``links`` links, or None when the profile admits none."""
        y, left = self.size - 1, links
        path = [y]
        while y != 0:
            found = None
            for x in range(self.upto[y], -1, -1):
                if lmin[x] <= left - 1 <= lmax[x] and cost[x] + self.weight(x, y) + tau == cost[y]:
                    found = x
                    break
            if found is None:
                return None
            path.append(found)
            y, left = found, left - 1
        if left != 0:
            return None
        path.reverse()
        return path


def klink_shortest_path(graph: MoflGraph, k: int) -> KLinkResult:
    """
    Cheapest path with exactly ``k + 1`` links from the first to the last node.

    Non-integral weights, or a shift at which no optimal path has exactly
    ``k + 1`` links, fall back to :func:`dp_baseline`.

    Raises:
        NoFeasiblePathError: every (k+1)-link path uses a forbidden edge
    """
    if not graph.integral:
        logger.info("Non-integral weights, using the layered DP  nodes=%d  k=%d", graph.size, k)
        return dp_baseline(graph, k)

    links = k + 1
    engine = _LagrangianEngine(graph)
    bound = int(round(graph.total_weight)) + 1
    last = graph.size - 1

    cost, lmin, lmax = engine.profile(-bound)
    if lmax[last] < links:
        raise NoFeasiblePathError(f"No {links}-link path respects separation {graph.sep:g}")

    lo, hi = -bound, bound
    while lo < hi:
        mid = (lo + hi) // 2
        if engine.profile(mid)[1][last] <= links:
            hi = mid
        else:
            lo = mid + 1
    tau = lo
    cost, lmin, lmax = engine.profile(tau)
    path = engine.walk(tau, links, cost, lmin, lmax) if lmin[last] <= links <= lmax[last] else None
    if path is None:
        logger.warning(
            "Lagrangian shift found no exact path, falling back to the layered DP  tau=%d  links=%d  range=[%d, %d]",
            tau, links, lmin[last], lmax[last],
        )
        return dp_baseline(graph, k)

    result = _path_result(graph, path)
    logger.debug("k-link path found  tau=%d  links=%d  cost=%g", tau, links, result.cost)
    return result


# ============== Solver ==============

def covered_weight(points: Sequence[Point], centers: Sequence[tuple[float, float]], lam: float, eps: float | None = None) -> float:
    """Weight of points strictly closer than ``lam`` (less ``eps``) to some center."""
    eps = resolve_eps(eps)
    total = 0.0
    for pt in points:
        if any(pt.distance(cx, cy) < lam - eps for cx, cy in centers):
            total += 1.0 if pt.weight is None else pt.weight
    return total


def mofl_graph(points: Sequence[Point], segment: Segment, k: int, lam: float, alpha: float = 1.0) -> MoflGraph:
    """Graph of an instance in its segment frame."""
    local, frame = normalize(points, segment)
    intervals = influence_intervals(local, lam)
    host = Segment(Point(0.0, 0.0), Point(frame.length, 0.0))
    positions = candidate_positions(intervals, host, k, alpha * lam)
    return build_graph(intervals, positions, alpha * lam, points=tuple(local), lam=lam)


def solve_mofl(
    points: Sequence[Point],
    segment: Segment,
    k: int,
    lam: float,
    alpha: float = 1.0,
) -> tuple[float, list[tuple[float, float]]]:
    """
    Minimum covered weight and the ``k`` centers in world coordinates.

    Raises:
        InfeasibleError: ``k`` centers do not fit at separation ``alpha * lam``
    """
    instance = MoflInstance(tuple(points), segment, k, lam, alpha)
    length = segment.length
    if (k - 1) * instance.sep > length + resolve_eps():
        raise InfeasibleError(
            f"{k} centers need {(k - 1) * instance.sep:g} but the segment is {length:g} long"
        )
    graph = mofl_graph(points, segment, k, lam, alpha)
    result = klink_shortest_path(graph, k)
    frame = SegmentFrame.from_segment(segment)
    centers = [frame.to_world(float(graph.positions[x])) for x in result.path[1:-1]]
    logger.info(
        "solve_mofl done  n=%d  k=%d  lam=%g  sep=%g  nodes=%d  covered=%g",
        len(points), k, lam, instance.sep, graph.size, result.covered_weight,
    )
    return result.covered_weight, centers


def h_profile(graph: MoflGraph, max_k: int) -> list[float]:
    """Minimum (k+1)-link cost for k = 1..max_k (``inf`` when infeasible)."""
    out = []
    for k in range(1, max_k + 1):
        try:
            out.append(dp_baseline(graph, k).cost)
        except NoFeasiblePathError:
            out.append(math.inf)
    return out

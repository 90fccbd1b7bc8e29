"""
Geometric primitives and forbidden/feasible regions.

Forbidden regions are open sets: a center exactly at distance lambda from a
demand point is legal. Feasible regions are their closed complements within
the host (a segment on the x-axis, or the angular ring of a circle).
"""

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .exceptions import InvalidGeometryError


TWO_PI = 2.0 * math.pi


def _check_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise InvalidGeometryError(f"Non-finite coordinate: {v!r}")


# ============== Primitives ==============

@dataclass(frozen=True, slots=True)
class Point:
    """Demand point; ``weight`` is only meaningful for mofl."""

    x: float
    y: float
    weight: float | None = None

    def __post_init__(self) -> None:
        _check_finite(self.x, self.y)
        if self.weight is not None:
            _check_finite(self.weight)
            if self.weight <= 0:
                raise InvalidGeometryError(f"Weight must be positive, got {self.weight}")

    def distance(self, x: float, y: float) -> float:
        return math.hypot(self.x - x, self.y - y)


@dataclass(frozen=True, slots=True)
class Segment:
    p: Point
    q: Point

    @property
    def length(self) -> float:
        return self.p.distance(self.q.x, self.q.y)

    @property
    def on_axis(self) -> bool:
        return self.p.y == 0.0 and self.q.y == 0.0 and self.p.x <= self.q.x


@dataclass(frozen=True, slots=True)
class SegmentFrame:
    """Rigid motion taking ``p`` to the origin and ``q`` onto the positive x-axis."""

    origin_x: float
    origin_y: float
    cos: float
    sin: float
    length: float

    @classmethod
    def from_segment(cls, segment: Segment) -> "SegmentFrame":
        dx = segment.q.x - segment.p.x
        dy = segment.q.y - segment.p.y
        length = math.hypot(dx, dy)
        if length == 0.0:
            return cls(segment.p.x, segment.p.y, 1.0, 0.0, 0.0)
        return cls(segment.p.x, segment.p.y, dx / length, dy / length, length)

    @property
    def host(self) -> Segment:
        return Segment(Point(0.0, 0.0), Point(self.length, 0.0))

    def to_local(self, pt: Point) -> Point:
        dx = pt.x - self.origin_x
        dy = pt.y - self.origin_y
        return Point(dx * self.cos + dy * self.sin, -dx * self.sin + dy * self.cos, pt.weight)

    def to_world(self, x: float) -> tuple[float, float]:
        return (self.origin_x + x * self.cos, self.origin_y + x * self.sin)


def normalize(points: Iterable[Point], segment: Segment) -> tuple[list[Point], SegmentFrame]:
    """Express ``points`` in the frame of ``segment`` (host becomes [0, |pq|] on the x-axis)."""
    frame = SegmentFrame.from_segment(segment)
    return [frame.to_local(pt) for pt in points], frame


def distance_to_host(pt: Point, length: float) -> float:
    """Distance from a normalized point to the host segment [0, length]."""
    dx = max(0.0, -pt.x, pt.x - length)
    return math.hypot(dx, pt.y)


@dataclass(frozen=True, slots=True)
class CircleSpec:
    center: Point
    radius: float

    def __post_init__(self) -> None:
        _check_finite(self.radius)
        if self.radius <= 0:
            raise InvalidGeometryError(f"Circle radius must be positive, got {self.radius}")

    def point_at(self, angle: float) -> tuple[float, float]:
        return (
            self.center.x + self.radius * math.cos(angle),
            self.center.y + self.radius * math.sin(angle),
        )

    def angle_of(self, pt: Point) -> float:
        return math.atan2(pt.y - self.center.y, pt.x - self.center.x) % TWO_PI


@dataclass(frozen=True, slots=True)
class Ring:
    """The boundary of a circle in angular (or arc-length) coordinates."""

    circumference: float = TWO_PI


RING = Ring()


@dataclass(frozen=True, slots=True)
class OpenInterval:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        _check_finite(self.lo, self.hi)
        if self.lo > self.hi:
            raise InvalidGeometryError(f"Interval bounds out of order: ({self.lo}, {self.hi})")

    def contains(self, x: float) -> bool:
        return self.lo < x < self.hi

    @property
    def length(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True, slots=True)
class Arc:
    """Open arc of the ring centered at ``mid``; ``full`` covers the whole ring."""

    mid: float
    half_width: float
    full: bool = False

    def to_interval(self, circumference: float = TWO_PI) -> tuple[float, float]:
        """Unrolled ``(lo, hi)`` with ``lo`` in [0, circumference); ``hi`` may exceed it."""
        lo = (self.mid - self.half_width) % circumference
        return lo, lo + 2.0 * self.half_width


@dataclass(frozen=True, slots=True)
class FeasibleSet:
    """Sorted, pairwise disjoint closed intervals (possibly single points)."""

    intervals: tuple[tuple[float, float], ...] = field(default_factory=tuple)

    def __iter__(self) -> Iterator[tuple[float, float]]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    @property
    def total_length(self) -> float:
        return sum(r - l for l, r in self.intervals)

    def contains(self, x: float, eps: float = 0.0) -> bool:
        return any(l - eps <= x <= r + eps for l, r in self.intervals)


# ============== Forbidden Regions ==============

def forbidden_interval_disk(pt: Point, lam: float) -> OpenInterval | None:
    """Centers on the x-axis within distance < lam of ``pt``."""
    _check_finite(lam)
    if lam <= 0:
        raise InvalidGeometryError(f"lambda must be positive, got {lam}")
    if abs(pt.y) >= lam:
        return None
    h = math.sqrt(lam * lam - pt.y * pt.y)
    if h == 0.0:
        return None
    return OpenInterval(pt.x - h, pt.x + h)


def forbidden_interval_square(pt: Point, size: float) -> OpenInterval | None:
    """Centers of axis-aligned squares of side ``size`` whose interior contains ``pt``."""
    _check_finite(size)
    if size <= 0:
        raise InvalidGeometryError(f"size must be positive, got {size}")
    half = size / 2.0
    if abs(pt.y) >= half:
        return None
    return OpenInterval(pt.x - half, pt.x + half)


def forbidden_arc(pt: Point, circle: CircleSpec, lam: float) -> Arc | None:
    """Boundary positions of ``circle`` within distance < lam of ``pt`` (law of cosines)."""
    _check_finite(lam)
    if lam <= 0:
        raise InvalidGeometryError(f"lambda must be positive, got {lam}")
    r = circle.radius
    d = pt.distance(circle.center.x, circle.center.y)
    if d == 0.0:
        return Arc(0.0, math.pi, full=True) if lam > r else None
    if lam >= d + r:
        return Arc(0.0, math.pi, full=True)
    if lam <= abs(d - r):
        return None
    cos_phi = (r * r + d * d - lam * lam) / (2.0 * r * d)
    phi = math.acos(max(-1.0, min(1.0, cos_phi)))
    return Arc(circle.angle_of(pt), phi)


# ============== Feasible Regions ==============

def merge_open_intervals(intervals: Iterable[tuple[float, float]]) -> list[tuple[float, float]]:
    """Union of open intervals; touching intervals stay separate (the shared point is free)."""
    merged: list[tuple[float, float]] = []
    for lo, hi in sorted(iv for iv in intervals if iv[0] < iv[1]):
        if merged and lo < merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged


def merge_ring_arcs(
    arcs: Iterable[Arc], circumference: float = TWO_PI
) -> list[tuple[float, float]] | None:
    """
    Union of open arcs on a ring as unrolled ``(lo, hi)`` pairs sorted by ``lo``.

    Returns None when the union is the whole ring.
    """
    pieces = []
    for arc in arcs:
        if arc.full:
            return None
        pieces.append(arc.to_interval(circumference))
    merged = merge_open_intervals(pieces)
    # absorb arcs that the last (wrapping) arc reaches past the origin
    while len(merged) > 1 and merged[-1][1] - circumference > merged[0][0]:
        lo0, hi0 = merged.pop(0)
        last_lo, last_hi = merged[-1]
        merged[-1] = (last_lo, max(last_hi, hi0 + circumference))
    if merged and merged[-1][1] - merged[-1][0] > circumference:
        return None
    return merged


def _complement(lo_host: float, hi_host: float, forbidden: Sequence[tuple[float, float]]) -> list[tuple[float, float]]:
    out: list[tuple[float, float]] = []
    cursor = lo_host
    for lo, hi in forbidden:
        if hi <= lo_host:
            continue
        if lo >= hi_host:
            break
        if lo >= cursor:
            out.append((cursor, lo))
        cursor = max(cursor, hi)
    if cursor <= hi_host:
        out.append((cursor, hi_host))
    return out


def feasible_set(host: Segment | Ring, forbidden: Iterable[OpenInterval | Arc]) -> FeasibleSet:
    """
    Closed complement of the union of ``forbidden`` within ``host``.

    On a segment (already on the x-axis) the output lies in [p.x, q.x]; on the
    ring it lies in [0, circumference] with a possible split at 0.
    """
    if isinstance(host, Segment):
        merged = merge_open_intervals((iv.lo, iv.hi) for iv in forbidden)  # type: ignore[union-attr]
        return FeasibleSet(tuple(_complement(host.p.x, host.q.x, merged)))

    c = host.circumference
    arcs = merge_ring_arcs(forbidden, c)  # type: ignore[arg-type]
    if arcs is None:
        return FeasibleSet()
    if not arcs:
        return FeasibleSet(((0.0, c),))
    pieces: list[tuple[float, float]] = []
    for i, (_, hi) in enumerate(arcs):
        next_lo = arcs[(i + 1) % len(arcs)][0] + (c if i == len(arcs) - 1 else 0.0)
        start, end = hi, next_lo
        if start >= c:
            start, end = start - c, end - c
        if end <= c:
            pieces.append((start, end))
        else:
            pieces.append((start, c))
            pieces.append((0.0, end - c))
    return FeasibleSet(tuple(sorted(pieces)))

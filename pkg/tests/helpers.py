"""
Random instance builders shared by the seeded suites.
"""

import math

import numpy as np

from dispersion.geometry import Point, Segment


def random_points(rng: np.random.Generator, n: int, box: float = 10.0, spread: float = 4.0, weighted: bool = False) -> list[Point]:
    """Points uniform in [0, box] x [-spread, spread], with integer weights 1..5 when ``weighted``."""
    xs = rng.uniform(0.0, box, size=n)
    ys = rng.uniform(-spread, spread, size=n)
    ws = rng.integers(1, 6, size=n) if weighted else [None] * n
    return [Point(float(x), float(y), None if w is None else float(w)) for x, y, w in zip(xs, ys, ws)]


def random_segment(rng: np.random.Generator) -> Segment:
    """A segment of length 4..12 with random position and orientation."""
    length = float(rng.uniform(4.0, 12.0))
    angle = float(rng.uniform(0.0, 2.0 * math.pi))
    px, py = (float(v) for v in rng.uniform(-5.0, 5.0, size=2))
    return Segment(Point(px, py), Point(px + length * math.cos(angle), py + length * math.sin(angle)))


def points_near(rng: np.random.Generator, segment: Segment, n: int, spread: float = 3.0) -> list[Point]:
    """Points scattered around ``segment`` (within ``spread`` of its line, slightly beyond its ends)."""
    dx, dy = segment.q.x - segment.p.x, segment.q.y - segment.p.y
    length = math.hypot(dx, dy)
    ux, uy = dx / length, dy / length
    out = []
    for _ in range(n):
        s = float(rng.uniform(-1.0, length + 1.0))
        t = float(rng.uniform(-spread, spread))
        out.append(Point(segment.p.x + s * ux - t * uy, segment.p.y + s * uy + t * ux))
    return out

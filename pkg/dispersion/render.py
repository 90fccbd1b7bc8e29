"""
SVG rendering of a solution on top of its instance.

Output is deterministic: fixed element order and fixed number formatting.
"""

import math
from typing import Sequence

from .config import get_settings, resolve_eps
from .exceptions import InconsistentSolutionError
from .instance_io import circle_of, instance_digest, points_of, segment_of
from .logging_config import get_logger
from .models import InstanceFile, Problem, SolutionFile


logger = get_logger("dispersion.render")

POINT_RADIUS_FRACTION = 0.006
MARGIN_FRACTION = 0.05


def _fmt(v: float) -> str:
    return f"{v + 0.0:.6f}".rstrip("0").rstrip(".") if math.isfinite(v) else "0"


def _distance_to_host(instance: InstanceFile, x: float, y: float) -> float:
    if instance.problem is Problem.COFL_CIRC:
        circle = circle_of(instance)
        return abs(circle.center.distance(x, y) - circle.radius)
    seg = segment_of(instance)
    px, py, qx, qy = seg.p.x, seg.p.y, seg.q.x, seg.q.y
    dx, dy = qx - px, qy - py
    length2 = dx * dx + dy * dy
    t = 0.0 if length2 == 0 else max(0.0, min(1.0, ((x - px) * dx + (y - py) * dy) / length2))
    return math.hypot(x - (px + t * dx), y - (py + t * dy))


def _radius(instance: InstanceFile, solution: SolutionFile) -> float:
    if instance.problem is Problem.MOFL:
        return float(instance.lam)
    if solution.lambda_star is None:
        raise InconsistentSolutionError("Solution carries no lambda_star")
    return solution.lambda_star


def check_consistency(instance: InstanceFile, solution: SolutionFile, eps: float | None = None) -> None:
    """
    Raises:
        InconsistentSolutionError: problem mismatch, missing centers, or a center off the host
    """
    if solution.problem is not instance.problem:
        raise InconsistentSolutionError(
            f"Solution is for {solution.problem.value}, instance is {instance.problem.value}"
        )
    if solution.centers is None:
        raise InconsistentSolutionError("Solution carries no centers")
    if solution.instance_digest != instance_digest(instance):
        logger.warning("Solution digest differs from instance  solution=%s", solution.instance_digest[:12])
    scale = max([1.0] + [abs(c) for center in solution.centers for c in center])
    tol = resolve_eps(eps) * scale
    for i, (x, y) in enumerate(solution.centers):
        off = _distance_to_host(instance, x, y)
        if off > tol:
            raise InconsistentSolutionError(f"centers[{i}] lies {off:.3g} off the host")


def _bounds(instance: InstanceFile, centers: Sequence[tuple[float, float]], radius: float) -> tuple[float, float, float, float]:
    xs: list[float] = []
    ys: list[float] = []
    if instance.problem is Problem.COFL_CIRC:
        circle = circle_of(instance)
        xs += [circle.center.x - circle.radius, circle.center.x + circle.radius]
        ys += [circle.center.y - circle.radius, circle.center.y + circle.radius]
    else:
        seg = segment_of(instance)
        xs += [seg.p.x, seg.q.x]
        ys += [seg.p.y, seg.q.y]
    xs += [p.x for p in instance.points]
    ys += [p.y for p in instance.points]
    half = radius if instance.problem is not Problem.COFL_LINE_SQ else radius / 2
    for cx, cy in centers:
        xs += [cx - half, cx + half]
        ys += [cy - half, cy + half]
    return min(xs), min(ys), max(xs), max(ys)


def render_svg(instance: InstanceFile, solution: SolutionFile, eps: float | None = None) -> bytes:
    """
    One SVG document: the host stroked, demand points as dots (area
    proportional to weight for mofl), each center with its radius-``lambda``
    disk (or side-``s`` square) at 30% opacity, covered points highlighted.

    Raises:
        InconsistentSolutionError: the solution does not belong to the instance
    """
    eps = resolve_eps(eps)
    check_consistency(instance, solution, eps)
    centers = [tuple(c) for c in solution.centers or []]
    radius = _radius(instance, solution)

    x0, y0, x1, y1 = _bounds(instance, centers, radius)
    extent = max(x1 - x0, y1 - y0, 1e-9)
    margin = MARGIN_FRACTION * extent
    x0, y0, x1, y1 = x0 - margin, y0 - margin, x1 + margin, y1 + margin
    width = get_settings().svg_width
    height = max(1, round(width * (y1 - y0) / (x1 - x0)))
    stroke = extent / 400.0
    dot = POINT_RADIUS_FRACTION * extent

    # world y grows upward, svg y downward
    def sy(y: float) -> str:
        return _fmt(-y)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{_fmt(x0)} {_fmt(-y1)} {_fmt(x1 - x0)} {_fmt(y1 - y0)}">',
        f"<title>{instance.problem.value} {solution.command} ({solution.solver})</title>",
    ]

    if instance.problem is Problem.COFL_CIRC:
        circle = circle_of(instance)
        lines.append(
            f'<circle class="host" cx="{_fmt(circle.center.x)}" cy="{sy(circle.center.y)}" r="{_fmt(circle.radius)}" '
            f'fill="none" stroke="black" stroke-width="{_fmt(stroke)}"/>'
        )
    else:
        seg = segment_of(instance)
        lines.append(
            f'<line class="host" x1="{_fmt(seg.p.x)}" y1="{sy(seg.p.y)}" x2="{_fmt(seg.q.x)}" y2="{sy(seg.q.y)}" '
            f'stroke="black" stroke-width="{_fmt(stroke)}"/>'
        )

    for cx, cy in centers:
        if instance.problem is Problem.COFL_LINE_SQ:
            lines.append(
                f'<rect class="disk square" x="{_fmt(cx - radius / 2)}" y="{sy(cy + radius / 2)}" '
                f'width="{_fmt(radius)}" height="{_fmt(radius)}" fill="steelblue" fill-opacity="0.3"/>'
            )
        else:
            lines.append(
                f'<circle class="disk" cx="{_fmt(cx)}" cy="{sy(cy)}" r="{_fmt(radius)}" '
                f'fill="steelblue" fill-opacity="0.3"/>'
            )
        lines.append(f'<circle class="center" cx="{_fmt(cx)}" cy="{sy(cy)}" r="{_fmt(dot)}" fill="navy"/>')

    covered_count = 0
    weighted = instance.problem is Problem.MOFL
    for pt in points_of(instance):
        covered = any(pt.distance(cx, cy) < radius - eps for cx, cy in centers) if weighted else False
        covered_count += covered
        r = dot * math.sqrt(pt.weight) if weighted and pt.weight else dot
        cls = "point covered" if covered else "point"
        fill = "crimson" if covered else "black"
        lines.append(f'<circle class="{cls}" cx="{_fmt(pt.x)}" cy="{sy(pt.y)}" r="{_fmt(r)}" fill="{fill}"/>')

    lines.append("</svg>")
    logger.info(
        "SVG rendered  problem=%s  centers=%d  points=%d  covered=%d",
        instance.problem.value, len(centers), len(instance.points), covered_count,
    )
    return ("\n".join(lines) + "\n").encode("utf-8")

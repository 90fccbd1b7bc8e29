"""
Command dispatch: one instance plus flags in, one ``SolutionFile`` out.
"""

import time
from dataclasses import dataclass
from typing import Optional

from pydantic import ValidationError

from .exceptions import SchemaError
from .geometry import SegmentFrame
from .instance_io import circle_of, instance_digest, points_of, segment_of, violations_of
from .logging_config import get_logger
from .models import InstanceFile, Problem, SolutionFile
from .solvers.circle import count_circle, solve_circle
from .solvers.line import count_disks, count_squares, solve_disks, solve_squares
from .solvers.mofl import dp_baseline, mofl_graph, solve_mofl


logger = get_logger("dispersion.runner")

COMMANDS = ("decide", "solve")

SOLVER_NAMES = {
    ("decide", Problem.COFL_LINE_SQ): "squares-interval-count",
    ("decide", Problem.COFL_LINE): "disks-greedy",
    ("decide", Problem.COFL_CIRC): "circle-jump-tables",
    ("solve", Problem.COFL_LINE_SQ): "squares-matrix-search",
    ("solve", Problem.COFL_LINE): "disks-matrix-search",
    ("solve", Problem.COFL_CIRC): "circle-matrix-search",
    ("solve", Problem.MOFL): "mofl-lagrangian",
}
BASELINE_SOLVER = "mofl-dp"


@dataclass(frozen=True, slots=True)
class RunFlags:
    """Command-line overrides; ``None`` keeps the instance value."""

    lam: Optional[float] = None
    k: Optional[int] = None
    alpha: Optional[float] = None
    baseline: bool = False


def apply_flags(instance: InstanceFile, flags: RunFlags) -> InstanceFile:
    """Instance with the overrides applied and re-validated."""
    update = {}
    if flags.k is not None:
        update["k"] = flags.k
    if flags.alpha is not None:
        update["alpha"] = flags.alpha
    if flags.lam is not None:
        update["lambda"] = flags.lam
    if not update:
        return instance
    data = instance.model_dump(by_alias=True)
    data.update(update)
    try:
        return InstanceFile.model_validate(data)
    except ValidationError as e:
        raise SchemaError(violations_of(e), "Invalid override") from e


def _decide(instance: InstanceFile) -> int:
    if instance.lam is None:
        raise SchemaError(["lambda: required for decide"])
    points = points_of(instance)
    if instance.problem is Problem.COFL_LINE_SQ:
        return count_squares(points, segment_of(instance), instance.lam)
    if instance.problem is Problem.COFL_LINE:
        return count_disks(points, segment_of(instance), instance.lam, instance.alpha)
    if instance.problem is Problem.COFL_CIRC:
        return count_circle(points, circle_of(instance), instance.lam, instance.alpha)
    raise SchemaError(["problem: decide is not defined for mofl"])


def _solve(instance: InstanceFile, baseline: bool) -> dict:
    points = points_of(instance)
    k, alpha = instance.k, instance.alpha
    if instance.problem is Problem.COFL_LINE_SQ:
        s_star, placement = solve_squares(points, segment_of(instance), k)
        return {"lambda_star": s_star, "centers": placement.world}
    if instance.problem is Problem.COFL_LINE:
        lam_star, placement = solve_disks(points, segment_of(instance), k, alpha)
        return {"lambda_star": lam_star, "centers": placement.world}
    if instance.problem is Problem.COFL_CIRC:
        lam_star, centers = solve_circle(points, circle_of(instance), k, alpha)
        return {"lambda_star": lam_star, "centers": centers}

    segment = segment_of(instance)
    if baseline:
        graph = mofl_graph(points, segment, k, instance.lam, alpha)
        result = dp_baseline(graph, k)
        frame = SegmentFrame.from_segment(segment)
        centers = [frame.to_world(float(graph.positions[x])) for x in result.path[1:-1]]
        return {"covered_weight": result.covered_weight, "centers": centers}
    covered, centers = solve_mofl(points, segment, k, instance.lam, alpha)
    return {"covered_weight": covered, "centers": centers}


def run(command: str, instance: InstanceFile, flags: RunFlags | None = None) -> SolutionFile:
    """
    Execute ``decide`` or ``solve`` on ``instance``.

    Raises:
        SchemaError: unknown command, or a flag combination the problem does not accept
        InfeasibleError: the solver found no admissible placement
    """
    flags = flags or RunFlags()
    if command not in COMMANDS:
        raise SchemaError([f"command: expected one of {', '.join(COMMANDS)}, got {command!r}"])
    instance = apply_flags(instance, flags)

    started = time.perf_counter()
    if command == "decide":
        fields = {"count": _decide(instance)}
    else:
        fields = _solve(instance, flags.baseline)
    wall_ms = (time.perf_counter() - started) * 1000.0

    if flags.baseline and instance.problem is Problem.MOFL and command == "solve":
        solver = BASELINE_SOLVER
    else:
        solver = SOLVER_NAMES[(command, instance.problem)]
    logger.info(
        "Run finished  command=%s  problem=%s  solver=%s  n=%d  k=%d  duration=%.2fms",
        command, instance.problem.value, solver, len(instance.points), instance.k, wall_ms,
    )
    return SolutionFile(
        problem=instance.problem,
        command=command,
        instance_digest=instance_digest(instance),
        solver=solver,
        wall_time_ms=wall_ms,
        generator=instance.generator,
        **fields,
    )

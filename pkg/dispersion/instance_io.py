"""
Instance files: parsing with field-path errors, canonical JSON, digests,
seeded generation and conversion to solver inputs.
"""

import hashlib
import json
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ValidationError

from .exceptions import SchemaError
from .geometry import CircleSpec, Point, Segment
from .logging_config import get_logger
from .models import (
    CircleSpecModel,
    GeneratorInfo,
    InstanceFile,
    PointSpec,
    Problem,
    SegmentSpec,
    SolutionFile,
)


logger = get_logger("dispersion.instance_io")

GENERATOR_NAME = "PCG64"

# Generated instances: host segment [0, SEGMENT_LENGTH] on the x-axis with
# points in [0, SEGMENT_LENGTH] x [-BOX_HALF_HEIGHT, BOX_HALF_HEIGHT]; host
# circle of radius CIRCLE_RADIUS at the origin with points in the square
# [-CIRCLE_BOX, CIRCLE_BOX]^2.
SEGMENT_LENGTH = 100.0
BOX_HALF_HEIGHT = 20.0
CIRCLE_RADIUS = 50.0
CIRCLE_BOX = 75.0
WEIGHT_RANGE = (1, 10)


# ============== Parsing ==============

def _format_loc(loc: tuple[Any, ...]) -> str:
    out = ""
    for part in loc:
        if isinstance(part, int):
            out += f"[{part}]"
        else:
            out += f".{part}" if out else str(part)
    return out or "<root>"


def violations_of(error: ValidationError) -> list[str]:
    """Flatten a pydantic error into ``path: message`` strings."""
    violations: list[str] = []
    for err in error.errors():
        if err["type"] == "instance_rules":
            violations.extend(err.get("ctx", {}).get("violations", []))
        else:
            violations.append(f"{_format_loc(tuple(err['loc']))}: {err['msg']}")
    return violations


def _validate(model: type[BaseModel], data: bytes, what: str) -> Any:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise SchemaError([f"<root>: not UTF-8 ({e.reason} at byte {e.start})"], f"Invalid {what}") from e
    try:
        return model.model_validate_json(text)
    except ValidationError as e:
        violations = violations_of(e)
        logger.debug("%s rejected  violations=%d", what, len(violations))
        raise SchemaError(violations, f"Invalid {what}") from e


def parse_instance(data: bytes) -> InstanceFile:
    """
    Validate an instance document.

    Raises:
        SchemaError: listing every violation with its field path
    """
    instance = _validate(InstanceFile, data, "instance")
    logger.debug(
        "Instance parsed  problem=%s  n=%d  k=%d", instance.problem.value, len(instance.points), instance.k
    )
    return instance


def parse_solution(data: bytes) -> SolutionFile:
    """Validate a solution document (used by ``plot --solution``)."""
    return _validate(SolutionFile, data, "solution")


# ============== Canonical JSON ==============

def canonical_json(model: BaseModel) -> bytes:
    """Sorted keys, no whitespace, shortest round-trip floats, absent fields dropped."""
    payload = model.model_dump(mode="json", by_alias=True, exclude_none=True)
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False).encode("utf-8")


def serialize_instance(instance: InstanceFile) -> bytes:
    return canonical_json(instance)


def instance_digest(instance: InstanceFile) -> str:
    """SHA-256 hex digest of the canonical instance bytes."""
    return hashlib.sha256(serialize_instance(instance)).hexdigest()


# ============== Generation ==============

def generate(
    problem: Problem,
    n: int,
    k: int,
    seed: int,
    alpha: float = 1.0,
    lam: Optional[float] = None,
) -> InstanceFile:
    """
    Deterministic random instance from a PCG64 stream seeded by ``seed``.

    Points are uniform in the declared box of the problem's host; mofl weights
    are uniform integers in 1..10. A mofl instance without ``lam`` gets one
    small enough for ``k`` centers to fit at separation ``alpha * lam``.
    """
    violations = []
    if n < 0:
        violations.append(f"n: must be >= 0, got {n}")
    if k < 1:
        violations.append(f"k: must be >= 1, got {k}")
    if violations:
        raise SchemaError(violations)
    rng = np.random.Generator(np.random.PCG64(seed))

    segment: SegmentSpec | None = None
    circle: CircleSpecModel | None = None
    if problem is Problem.COFL_CIRC:
        circle = CircleSpecModel(center=(0.0, 0.0), radius=CIRCLE_RADIUS)
        xs = rng.uniform(-CIRCLE_BOX, CIRCLE_BOX, size=n)
        ys = rng.uniform(-CIRCLE_BOX, CIRCLE_BOX, size=n)
    else:
        segment = SegmentSpec(p=(0.0, 0.0), q=(SEGMENT_LENGTH, 0.0))
        xs = rng.uniform(0.0, SEGMENT_LENGTH, size=n)
        ys = rng.uniform(-BOX_HALF_HEIGHT, BOX_HALF_HEIGHT, size=n)

    weights: list[float | None] = [None] * n
    if problem is Problem.MOFL:
        weights = [float(w) for w in rng.integers(WEIGHT_RANGE[0], WEIGHT_RANGE[1] + 1, size=n)]
        if lam is None:
            lam = SEGMENT_LENGTH / (2.0 * k * max(1.0, alpha))

    instance = InstanceFile(
        problem=problem,
        segment=segment,
        circle=circle,
        points=[PointSpec(x=float(x), y=float(y), w=w) for x, y, w in zip(xs, ys, weights)],
        k=k,
        alpha=alpha,
        lam=lam,
        generator=GeneratorInfo(name=GENERATOR_NAME, seed=seed),
    )
    logger.info("Instance generated  problem=%s  n=%d  k=%d  seed=%d", problem.value, n, k, seed)
    return instance


# ============== Conversion ==============

def points_of(instance: InstanceFile) -> list[Point]:
    return [Point(p.x, p.y, p.w) for p in instance.points]


def segment_of(instance: InstanceFile) -> Segment:
    if instance.segment is None:
        raise SchemaError([f"segment: required for {instance.problem.value}"])
    (px, py), (qx, qy) = instance.segment.p, instance.segment.q
    return Segment(Point(px, py), Point(qx, qy))


def circle_of(instance: InstanceFile) -> CircleSpec:
    if instance.circle is None:
        raise SchemaError([f"circle: required for {instance.problem.value}"])
    cx, cy = instance.circle.center
    return CircleSpec(Point(cx, cy), instance.circle.radius)

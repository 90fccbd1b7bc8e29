"""
Pydantic models for the instance and solution files and the CLI error body.
"""

from enum import Enum
from typing import Annotated, Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic_core import PydanticCustomError


FiniteFloat = Annotated[float, Field(allow_inf_nan=False)]
Coordinate = tuple[FiniteFloat, FiniteFloat]


class Problem(str, Enum):
    """Supported problem families."""
    COFL_LINE_SQ = "cofl-line-sq"
    COFL_LINE = "cofl-line"
    COFL_CIRC = "cofl-circ"
    MOFL = "mofl"

    @property
    def on_segment(self) -> bool:
        return self is not Problem.COFL_CIRC


# ============== Instance File ==============

class PointSpec(BaseModel):
    """Demand point; ``w`` is required (positive integer) for mofl."""

    x: FiniteFloat = Field(..., description="x coordinate")
    y: FiniteFloat = Field(..., description="y coordinate")
    w: Optional[FiniteFloat] = Field(default=None, gt=0, description="Point weight (mofl)")


class SegmentSpec(BaseModel):
    """Host segment pq for the line problems."""

    p: Coordinate = Field(..., description="First endpoint [x, y]")
    q: Coordinate = Field(..., description="Second endpoint [x, y]")


class CircleSpecModel(BaseModel):
    """Host circle for cofl-circ."""

    center: Coordinate = Field(..., description="Circle center [x, y]")
    radius: FiniteFloat = Field(..., gt=0, description="Circle radius r_c")


class GeneratorInfo(BaseModel):
    """Provenance of a generated instance."""

    name: str = Field(..., description="PRNG bit generator name")
    seed: int = Field(..., description="Seed passed to the generator")


class InstanceFile(BaseModel):
    """A problem instance as stored on disk."""

    problem: Problem = Field(..., description="Problem family")
    segment: Optional[SegmentSpec] = Field(default=None, description="Host segment")
    circle: Optional[CircleSpecModel] = Field(default=None, description="Host circle")
    points: list[PointSpec] = Field(default_factory=list, description="Demand points")
    k: int = Field(..., ge=1, description="Number of facilities")
    alpha: FiniteFloat = Field(default=1.0, gt=0, description="Separation coefficient")
    lam: Optional[FiniteFloat] = Field(
        default=None, gt=0, alias="lambda", description="Radius (mofl, decide)"
    )
    generator: Optional[GeneratorInfo] = Field(default=None, description="Generator metadata")

    model_config = ConfigDict(
        populate_by_name=True,
        json_schema_extra={
            "example": {
                "problem": "cofl-line",
                "segment": {"p": [0, 0], "q": [10, 0]},
                "points": [{"x": 5, "y": 0}],
                "k": 2,
                "alpha": 0.5,
            }
        },
    )

    @model_validator(mode="after")
    def _check_cross_field_rules(self) -> "InstanceFile":
        violations = cross_field_violations(self)
        if violations:
            raise PydanticCustomError(
                "instance_rules",
                "{count} instance rule(s) violated",
                {"count": len(violations), "violations": violations},
            )
        return self


def cross_field_violations(instance: InstanceFile) -> list[str]:
    """Rules that depend on the problem tag, reported with field paths."""
    violations: list[str] = []
    if instance.problem.on_segment:
        if instance.segment is None:
            violations.append(f"segment: required for {instance.problem.value}")
    elif instance.circle is None:
        violations.append(f"circle: required for {instance.problem.value}")

    if instance.problem is Problem.MOFL:
        if instance.lam is None:
            violations.append("lambda: required for mofl")
        for i, pt in enumerate(instance.points):
            if pt.w is None:
                violations.append(f"points[{i}].w: required for mofl")
            elif not float(pt.w).is_integer():
                violations.append(f"points[{i}].w: must be an integer for mofl")
    return violations


# ============== Solution File ==============

class SolutionFile(BaseModel):
    """Result of ``decide`` or ``solve``."""

    problem: Problem = Field(..., description="Problem family")
    command: str = Field(..., description="decide or solve")
    count: Optional[int] = Field(default=None, description="A(lambda) for decide")
    lambda_star: Optional[float] = Field(default=None, description="Optimal radius / size")
    covered_weight: Optional[float] = Field(default=None, description="Covered weight (mofl)")
    centers: Optional[list[tuple[float, float]]] = Field(
        default=None, description="Facility centers in world coordinates"
    )
    instance_digest: str = Field(..., alias="instanceDigest", description="SHA-256 of the canonical instance")
    solver: str = Field(..., description="Solver that produced the result")
    wall_time_ms: float = Field(..., alias="wallTimeMs", description="Wall time in milliseconds")
    generator: Optional[GeneratorInfo] = Field(default=None, description="Generator metadata of the instance")

    model_config = ConfigDict(populate_by_name=True)


class BenchRow(BaseModel):
    """One CSV row produced by ``bench``."""

    n: int
    k: int
    solver: str
    wall_time_ms: float = Field(..., alias="wallTimeMs")
    result: float

    model_config = ConfigDict(populate_by_name=True)


class ErrorResponse(BaseModel):
    """JSON body written on a failed command."""

    success: bool = Field(default=False, description="Always false")
    code: int = Field(..., description="Business code")
    message: str = Field(..., description="Error message")
    violations: list[str] = Field(default_factory=list, description="Field-level violations")
    details: Optional[dict[str, Any]] = Field(default=None, description="Extra context")


# ============== Error Codes ==============

class ErrorCode:
    """Error code definitions."""

    SUCCESS = 0
    SCHEMA_ERROR = 40001
    INVALID_GEOMETRY = 40002
    INVALID_SIZE = 40003
    INDEX_OUT_OF_RANGE = 40004
    VERSION_ERROR = 40005
    INVALID_EDGE = 40006
    INCONSISTENT_SOLUTION = 40007
    INFEASIBLE = 42201
    NO_FEASIBLE_PATH = 42202
    NO_FEASIBLE_CANDIDATE = 42203
    UNBOUNDED = 42204
    BUDGET_EXCEEDED = 42901
    MODEL_INVARIANT = 50001
    INTERNAL_ERROR = 50002

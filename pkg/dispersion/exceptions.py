"""
Exception hierarchy for the dispersion solvers and the CLI error handler.
Every domain error carries a business code and the process exit code it maps to.
"""

import json
import sys
from typing import TextIO

from .models import ErrorCode, ErrorResponse
from .logging_config import get_logger


logger = get_logger("dispersion.exception")


# ============== Exit Codes ==============

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_INFEASIBLE = 3
EXIT_INTERNAL = 4


# ============== Custom Exceptions ==============

class DispersionError(Exception):
    """Base exception for dispersion errors."""

    def __init__(self, code: int, message: str, exit_code: int = EXIT_INTERNAL):
        self.code = code
        self.message = message
        self.exit_code = exit_code
        super().__init__(message)


class SchemaError(DispersionError):
    """Raised when an instance or solution document fails validation."""

    def __init__(self, violations: list[str], message: str = "Schema validation failed"):
        self.violations = violations
        super().__init__(
            code=ErrorCode.SCHEMA_ERROR,
            message=f"{message}: {'; '.join(violations)}" if violations else message,
            exit_code=EXIT_SCHEMA,
        )


class InvalidGeometryError(DispersionError):
    """Raised for non-finite coordinates or out-of-domain geometric input."""

    def __init__(self, message: str = "Invalid geometry"):
        super().__init__(code=ErrorCode.INVALID_GEOMETRY, message=message, exit_code=EXIT_SCHEMA)


class InvalidSizeError(DispersionError):
    """Raised when a structure is requested with a non-positive size."""

    def __init__(self, size: int):
        super().__init__(
            code=ErrorCode.INVALID_SIZE,
            message=f"Size must be at least 1, got {size}",
        )


class IndexOutOfRangeError(DispersionError, IndexError):
    """Raised for indices outside a structure's 1-based range."""

    def __init__(self, message: str):
        super().__init__(code=ErrorCode.INDEX_OUT_OF_RANGE, message=message)


class VersionError(DispersionError):
    """Raised when a persistent structure is queried at an unknown version."""

    def __init__(self, version: int, latest: int):
        super().__init__(
            code=ErrorCode.VERSION_ERROR,
            message=f"Version {version} outside 0..{latest}",
        )


class InvalidEdgeError(DispersionError):
    """Raised when an edge weight is requested for x >= y."""

    def __init__(self, x: int, y: int):
        super().__init__(
            code=ErrorCode.INVALID_EDGE,
            message=f"Edge requires x < y, got x={x} y={y}",
        )


class InconsistentSolutionError(DispersionError):
    """Raised when a solution does not fit the instance it is rendered with."""

    def __init__(self, message: str = "Solution is inconsistent with the instance"):
        super().__init__(
            code=ErrorCode.INCONSISTENT_SOLUTION,
            message=message,
            exit_code=EXIT_SCHEMA,
        )


class InfeasibleError(DispersionError):
    """Raised when no parameter value admits the requested number of centers."""

    def __init__(self, message: str = "Instance is infeasible", code: int = ErrorCode.INFEASIBLE):
        super().__init__(code=code, message=message, exit_code=EXIT_INFEASIBLE)


class NoFeasiblePathError(InfeasibleError):
    """Raised when every (k+1)-link path uses a forbidden edge."""

    def __init__(self, message: str = "No feasible k-link path"):
        super().__init__(message=message, code=ErrorCode.NO_FEASIBLE_PATH)


class UnboundedObjectiveError(InfeasibleError):
    """Raised when the clearance can grow without bound (no demand points, k = 1)."""

    def __init__(self, message: str = "Objective is unbounded"):
        super().__init__(message=message, code=ErrorCode.UNBOUNDED)


class NoFeasibleCandidateError(DispersionError):
    """Raised by matrix search when no entry satisfies the predicate."""

    def __init__(self, message: str = "No candidate satisfies the feasibility test"):
        super().__init__(
            code=ErrorCode.NO_FEASIBLE_CANDIDATE,
            message=message,
            exit_code=EXIT_INFEASIBLE,
        )


class BudgetExceededError(DispersionError):
    """Raised when an exhaustive oracle is asked for more than its budget allows."""

    def __init__(self, what: str, value: int, limit: int):
        super().__init__(
            code=ErrorCode.BUDGET_EXCEEDED,
            message=f"Oracle budget exceeded: {what}={value} > {limit}",
        )


class ModelInvariantViolation(DispersionError):
    """Raised when an internal model reaches a stage whose precondition fails."""

    def __init__(self, message: str):
        super().__init__(code=ErrorCode.MODEL_INVARIANT, message=message)


# ============== CLI Error Handler ==============

def handle_cli_error(exc: BaseException, command: str, stream: TextIO | None = None) -> int:
    """
    Log an error, write the JSON error body and return the process exit code.

    Domain errors are logged as warnings with their code; anything else is an
    internal error logged with its traceback.
    """
    out = stream if stream is not None else sys.stdout

    if isinstance(exc, DispersionError):
        logger.warning(
            "Command failed  command=%s  code=%d  exit=%d  error=%s  message=%s",
            command,
            exc.code,
            exc.exit_code,
            type(exc).__name__,
            exc.message,
        )
        body = ErrorResponse(
            code=exc.code,
            message=exc.message,
            violations=getattr(exc, "violations", []),
        )
        exit_code = exc.exit_code
    else:
        logger.error(
            "Unhandled exception  command=%s  error=%s",
            command,
            str(exc),
            exc_info=exc,
        )
        body = ErrorResponse(code=ErrorCode.INTERNAL_ERROR, message="Internal error")
        exit_code = EXIT_INTERNAL

    out.write(json.dumps(body.model_dump(), sort_keys=True) + "\n")
    return exit_code

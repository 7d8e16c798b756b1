"""Exceptions raised by stattest."""

from __future__ import annotations

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:  # pragma: no cover
    from ._numkit import SolveReport


class StattestError(Exception):
    """Base class for all stattest errors."""


class DimensionError(StattestError, ValueError):
    """Raised when array shapes or lengths do not agree."""


class SchemaError(StattestError, ValueError):
    """Raised when a JSON or DIMACS document does not follow its schema."""


class GuardExceededError(StattestError, RuntimeError):
    """Raised when an exponential enumeration would exceed its configured guard."""

    def __init__(self, what: str, size: int, limit: int) -> None:
        super().__init__(
            f"Enumeration guard exceeded for {what}: size {size} is larger than the limit {limit}."
        )
        self.what = what
        self.size = size
        self.limit = limit


class SolverError(StattestError, RuntimeError):
    """Raised when an LP or QP did not reach a trustworthy answer.

    The result of such a solve is indeterminate and must never be read as a
    feasibility or optimality verdict.
    """

    def __init__(self, message: str, report: Optional[SolveReport] = None) -> None:
        super().__init__(message)
        self.report = report

"""Exception types shared across the pipeline."""

from __future__ import annotations


class ConstraintError(Exception):
    """A geometry, alignment, or budget constraint was violated."""


class GeometryError(ConstraintError):
    """Invalid or incompatible pixel geometry (zero dims, canvas too small, ...)."""


class AlignmentError(ConstraintError):
    """Image dimensions are not aligned to the tile grid."""


class BudgetExceededError(ConstraintError):
    """A token total overflowed its context limit."""

    def __init__(self, total: int, limit: int):
        super().__init__(f"token total {total} exceeds limit {limit}")
        self.total = total
        self.limit = limit


class FormatError(ValueError):
    """A file could not be decoded (bad magic, truncated payload, ...)."""

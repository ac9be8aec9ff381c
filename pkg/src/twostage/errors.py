"""Error types shared across the package.

Each error carries a short machine-readable ``code`` so the command line
front end can map failures onto stable exit codes without string matching.
"""

from __future__ import annotations

__all__ = [
    "TwoStageError",
    "InputFormatError",
    "ValidationError",
    "SizeBoundError",
    "InternalConsistencyError",
    "Violation",
]


class TwoStageError(Exception):
    """Base class; ``code`` identifies the failure category."""

    code = "E_INTERNAL"


class InputFormatError(TwoStageError):
    """Malformed input document: syntax errors, missing or ill-typed fields."""

    code = "E_PARSE"


class Violation:
    """A single violated invariant together with a concrete witness."""

    __slots__ = ("field", "message", "witness")

    def __init__(self, field: str, message: str, witness=None):
        self.field = field
        self.message = message
        self.witness = witness

    def __repr__(self):
        if self.witness is None:
            return f"{self.field}: {self.message}"
        return f"{self.field}: {self.message} (witness: {self.witness!r})"


class ValidationError(TwoStageError):
    """Well-formed input whose mathematical invariants do not hold.

    ``violations`` lists every detected failure, each with a witness, so a
    caller can report all problems at once instead of one per run.
    """

    code = "E_VALIDATION"

    def __init__(self, violations):
        if isinstance(violations, Violation):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(repr(v) for v in self.violations))


class SizeBoundError(TwoStageError):
    """A computation would exceed a configured size bound; aborted up front."""

    code = "E_SIZE"

    def __init__(self, message: str, requested=None, bound=None):
        self.requested = requested
        self.bound = bound
        if requested is not None and bound is not None:
            message = f"{message} (requested {requested}, bound {bound})"
        super().__init__(message)


class InternalConsistencyError(TwoStageError):
    """Two routes to the same value disagreed, or a certified invariant broke.

    This is never a user error.  It indicates a defect and aborts the run.
    """

    code = "E_INTERNAL"

"""Exception types shared across the package."""


class MultigraphError(ValueError):
    """Structural violation: bad involution, conjugation mismatch, unknown vertex."""


class GraphParseError(MultigraphError):
    """Malformed graph or lift-spec text. Carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class LiftError(MultigraphError):
    """Invalid permutation assignment for a lift."""


class BudgetError(RuntimeError):
    """A size or memory budget would be exceeded."""


class KernelSearchError(RuntimeError):
    """No usable kernel vector was found where one was required."""


class VerificationFailure(AssertionError):
    """An internal consistency check failed on user data."""

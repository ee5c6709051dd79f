"""Exception types shared across the package."""


class CoverageError(ValueError):
    """A table does not extend far enough for the requested computation."""


class ResourceLimitError(RuntimeError):
    """Building the requested table would exceed the configured memory ceiling."""


class NotFoundBelowBound(Exception):
    """A search exhausted its range without a hit; carries the searched bound."""

    def __init__(self, bound, message=None):
        self.bound = bound
        super().__init__(message or f"not found below {bound}")


class InternalConsistencyError(RuntimeError):
    """A proved property failed to hold; indicates a bug, not bad input."""

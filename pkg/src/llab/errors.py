"""Exception types raised across the package."""


class LlabError(Exception):
    """Base class for all package errors."""


class InvalidArgument(LlabError, ValueError):
    pass


class TableTooSmall(LlabError):
    """The arithmetic table does not reach the largest index a computation needs."""

    def __init__(self, required, available):
        self.required = int(required)
        self.available = int(available)
        super().__init__(
            f"arithmetic table covers n <= {self.available}, "
            f"but n_max >= {self.required} is required"
        )


class UndefinedRatio(LlabError, ZeroDivisionError):
    pass


class UndefinedDiscrepancy(LlabError, ValueError):
    pass


class UnsupportedMode(LlabError, ValueError):
    pass


class TheoremViolation(LlabError, AssertionError):
    """A finite instance contradicts a proven statement; never swallowed."""

"""Exception hierarchy shared by every module."""


class CoisoError(Exception):
    """Base class for all package errors."""


class ArgumentError(CoisoError, ValueError):
    pass


class PrecisionError(CoisoError):
    """Raised when the requested precision cannot be honoured.

    ``required_digits`` carries the digit count that would be needed, when known.
    """

    def __init__(self, message, required_digits=None):
        super().__init__(message)
        self.required_digits = required_digits


class GridMismatchError(CoisoError, ValueError):
    pass


class ResourceError(CoisoError):
    """A sparse product would exceed the configured term budget."""


class NotClosedError(CoisoError):
    """A form expected to be d_F-closed is not."""


class SolveError(CoisoError):
    """A homological equation could not be solved; ``report`` holds the verdict."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report

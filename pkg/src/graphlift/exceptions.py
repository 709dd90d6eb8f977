"""Exception types raised across graphlift."""


class GraphFormatError(ValueError):
    """An edge-list line could not be parsed."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class EmptyGraphError(ValueError):
    """The input produced no edges."""


class CannotExtendError(RuntimeError):
    """A lift was requested on a subgraph with an empty edge boundary."""


class TooLargeError(RuntimeError):
    """An exhaustive computation would exceed its configured size guard."""


class InsufficientDataError(ValueError):
    """Not enough samples for the requested statistic."""

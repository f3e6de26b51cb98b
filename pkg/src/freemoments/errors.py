"""Exception types shared across the package.

Each class carries the CLI exit code it maps to.
"""


class FreeMomentsError(Exception):
    exit_code = 2


class InvalidInputError(FreeMomentsError, ValueError):
    exit_code = 2


class RegimeError(FreeMomentsError, ValueError):
    """A count-based method was requested below its basis threshold."""

    exit_code = 3

    def __init__(self, message, threshold=None):
        super().__init__(message)
        self.threshold = threshold


class ResourceError(FreeMomentsError, RuntimeError):
    """A computation would exceed the memory budget or a configured cap."""

    exit_code = 4

    def __init__(self, message, attained_k=None):
        super().__init__(message)
        self.attained_k = attained_k


class HomomorphismError(InvalidInputError):
    pass

"""Exception hierarchy shared by every stage of the pipeline."""


class SafeDissocError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(SafeDissocError, ValueError):
    """A parameter (k, m, delta, limit, background, ...) is out of range."""


class PreconditionError(SafeDissocError):
    """Partial suppression was requested on a chunk that does not admit it."""


class LimitExceededError(SafeDissocError):
    """Exhaustive reconstruction enumeration would exceed the caller's limit.

    ``count`` is the number of reconstruction classes reached (a lower bound
    when enumeration was cut short inside a single cluster).
    """

    def __init__(self, count, limit):
        self.count = count
        self.limit = limit
        super().__init__(f"reconstruction count {count} exceeds limit {limit}")


class FormatError(SafeDissocError, ValueError):
    """A dataset or disassociated-dataset file could not be parsed."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class InconsistencyError(SafeDissocError):
    """Two inputs that must agree (e.g. before/after datasets) do not."""

"""Exception hierarchy shared by every solver module."""


class TruckloadError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(TruckloadError, ValueError):
    """A caller passed ids, paths or parameters that do not exist or make no sense."""


class InfeasibleAssignmentError(InvalidInputError):
    """A tour is longer than the rental period of the vehicle it was given to."""


class ValidationError(TruckloadError):
    """An instance or solution failed validation.

    The individual violations are kept in ``violations``.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "validation failed")


class InfeasibleError(TruckloadError):
    """No feasible schedule exists (or none was found over the available columns)."""

    def __init__(self, message, uncovered=()):
        self.uncovered = tuple(uncovered)
        super().__init__(message)


class ResourceLimitError(TruckloadError):
    """A configured size cap (pool size, brute-force task limit) was exceeded."""


class NonTerminationError(TruckloadError):
    """An iterative procedure hit its iteration cap."""

    def __init__(self, message, diagnostics=None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class ParseError(TruckloadError, ValueError):
    """A file could not be parsed; the message carries line/field context."""


class BenchMismatchError(TruckloadError):
    """Column generation and the exact model disagreed beyond the tolerance in a benchmark."""

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)

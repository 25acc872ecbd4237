"""Exception types shared across the package."""


class BievolutionError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BievolutionError, ValueError):
    """An argument lies outside the domain of the operation."""


class EnumerationCapExceeded(BievolutionError):
    """Explicit path enumeration would exceed the configured term cap."""


class TableCapExceeded(BievolutionError):
    """The dynamic-programming table would exceed the configured size cap."""


class BracketError(BievolutionError, ValueError):
    """A search bracket does not enclose a maximum."""


class NotHermitian(BievolutionError, ValueError):
    """A matrix expected to be Hermitian is not."""


class ModeError(BievolutionError):
    """The operation does not apply to the selected time-step model."""


class ConfigError(BievolutionError):
    """A configuration file could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)

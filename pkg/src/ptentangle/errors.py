"""Exception hierarchy shared by the library and the CLI."""


class PTEntangleError(Exception):
    """Base class for all package errors."""


class ValidationError(PTEntangleError, ValueError):
    """An input violates a documented invariant."""


class InvalidDimensionError(ValidationError):
    pass


class PreconditionError(ValidationError):
    pass


class NormalizationError(ValidationError):
    """A metric was asked for on a state whose trace is not 1."""


class ConfigError(PTEntangleError, ValueError):
    """Malformed or inconsistent scenario configuration."""


class NumericalFailureError(PTEntangleError, ArithmeticError):
    pass


class TraceCollapseError(NumericalFailureError):
    """The raw trace of an evolving state fell below the collapse threshold."""

"""Exception hierarchy shared by every module."""


class RepgameError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(RepgameError, ValueError):
    """An argument lies outside the domain of the operation."""


class DivergenceError(DomainError):
    """A series that defines a requested quantity does not converge."""


class UnsupportedModeError(RepgameError):
    """The requested numeric context cannot represent the computation."""


class NoContractionError(RepgameError):
    """The response matrices are not contractions, so their series diverge."""


class RangeError(DomainError):
    """A certificate was requested outside the parameter range it applies to."""


class ConvergenceError(RepgameError):
    """An iteration failed to reach its tolerance within the iteration cap."""


class InconclusiveError(RepgameError):
    """A computed margin is smaller than its own error budget."""

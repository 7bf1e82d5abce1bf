"""Exception hierarchy shared across the package."""


class AnisoError(Exception):
    """Base class for all package errors."""


class ContractViolation(AnisoError, ValueError):
    """An input broke a documented precondition (shape, symmetry, unitarity, norm)."""


class InternalConsistencyError(AnisoError, RuntimeError):
    """A computed quantity left its physically allowed range by more than float noise."""


class UsageError(AnisoError, ValueError):
    """Invalid option, unknown name, or conflicting arguments."""


class ParseError(AnisoError, ValueError):
    """A state, directions, or counts file could not be read."""


class IncompleteDataError(AnisoError, ValueError):
    """A count dataset is missing settings or has empty settings."""

    def __init__(self, message, missing=()):
        super().__init__(message)
        self.missing = tuple(missing)

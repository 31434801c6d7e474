"""Exception types raised across the package."""


class UPBError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(UPBError, ValueError):
    """Shapes or lengths of the inputs do not agree."""


class DomainError(UPBError, ValueError):
    """A parameter lies outside the range where the operation is defined."""


class NoSolutionError(UPBError):
    """A linear constraint system has only the zero solution."""


class DegenerateError(UPBError):
    """Input is rank deficient or otherwise degenerate."""


class ConstructionError(UPBError):
    """A randomized constructor exhausted its retries.

    ``residuals`` carries the best residuals seen, keyed by name.
    """

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = dict(residuals or {})


class CertificationError(UPBError):
    """A deterministic construction failed its post-hoc certificate."""


class ResourceError(UPBError):
    """An exhaustive search would exceed its node budget."""


class UnsupportedCaseError(UPBError):
    """No builder covers the requested dimensions."""

"""Exception types shared across the package."""


class TdemassError(Exception):
    """Base class for all package-specific errors."""


class ProfileDomainError(TdemassError, ValueError):
    """A mass profile was queried outside its domain of definition."""


class QuadratureError(TdemassError, RuntimeError):
    """A numerical integration failed to reach the requested tolerance."""


class NonDiagonalizableError(TdemassError, ValueError):
    """Invariant parameters violate the diagonalizability constraint."""


class SingularCoefficientError(TdemassError, ValueError):
    """The packet-width coefficient alpha(t) is not positive."""


class ConsistencyError(TdemassError, ValueError):
    """Mismatched inputs, e.g. a packet and coefficients taken at different times."""


class DomainTooSmallError(TdemassError, RuntimeError):
    """The propagation grid failed to contain the evolving state."""

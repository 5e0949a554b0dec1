"""Exception hierarchy shared by all modules."""


class PSTError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PSTError, ValueError):
    """Arguments outside the mathematical domain of an operation."""


class CapacityError(PSTError):
    """A configured size cap would be exceeded."""


class IntegrityError(PSTError):
    """A structural identity that must hold by construction was violated."""


class DegeneracyError(PSTError):
    """Near-coincident roots in the spectral support."""


class NumericalFailure(PSTError):
    """A numerical self-check (orthonormality, weight positivity, ...) failed."""


class PoleProximityError(PSTError):
    """Evaluation point too close to a pole of the Stieltjes transform."""


class NotAntipodalError(PSTError):
    """The last stratum is not a singleton, so PST is impossible in this scheme."""


class IdentityViolationError(IntegrityError):
    """Spin-sector operator does not reproduce the adjacency algebra."""

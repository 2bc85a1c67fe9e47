"""Exception hierarchy shared by all xfid modules.

ValidationError and its subclasses map to CLI exit code 2, and
InfeasibleTargetError maps to exit code 3.
"""


class XFidError(Exception):
    """Base class for all xfid errors."""


class ValidationError(XFidError):
    """Input rejected: out-of-range parameter, malformed matrix, bad flag."""


class NonHermitianError(ValidationError):
    """Matrix is not Hermitian within tolerance."""


class NotPSDError(ValidationError):
    """Matrix has an eigenvalue below the positive-semidefinite tolerance."""


class ShapeError(ValidationError):
    """Density matrix is not X shaped (off-pattern entries above tolerance)."""


class DomainError(ValidationError):
    """Scalar argument outside the domain of a closed-form relation."""


class InfeasibleTargetError(XFidError):
    """No valid state realizes the requested target combination."""


class ConsistencyError(XFidError):
    """Internal cross-check failed (imaginary residue, closed vs oracle)."""

"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input violates a documented precondition."""


class TruncationOverflowError(RuntimeError):
    """State carries non-negligible weight in the truncation boundary shell.

    Raised when amplitude weight within the margin-2 boundary shell of the
    Fock box exceeds the leakage gate.  The fix is a larger cutoff or
    smaller transformation parameters, and the message says so.
    """


class DegeneracyError(RuntimeError):
    """Numerical pairing of symplectic eigenvalues failed."""


class CorrelatedStateError(ValueError):
    """Diagonal-covariance bound requested for a correlated state."""

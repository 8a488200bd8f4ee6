"""Typed exceptions shared across the package.

Every failure mode that a caller may want to distinguish gets its own
class; the CLI maps them onto exit codes.
"""


class DomainError(ValueError):
    """Input outside the documented domain of an operation."""


class UsageError(DomainError):
    """Malformed CLI arguments or config entries."""


class ConvergenceError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance.

    The best available estimate is attached so callers can inspect it
    without re-running.
    """

    def __init__(self, message, estimate=None, error_estimate=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


class ValidityError(RuntimeError):
    """The scattering integrand left its domain of validity.

    Raised when |h|^2 >= 1 at an evaluated point, when a determinant
    turns non-positive, or when a reflection factor exceeds unity.
    Carries a diagnostics dict (grid location, magnitudes) when known.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class SingularCouplingError(ValidityError):
    """The momentum-space single-lattice function passed through zero.

    A zero signals a lattice band / bound state; the two-lattice
    integrand is meaningless there and must not be clamped over.
    """


class MatrixConditionError(ValidityError):
    """Position-space scattering matrix failed its conditioning check."""

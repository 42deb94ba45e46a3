"""Exception hierarchy.

Two branches matter for callers: ``DomainError`` (bad inputs or parameters,
a ``ValueError`` subclass) and ``NumericalError`` (an algorithm failed on
otherwise admissible inputs).  The CLI maps them to exit codes 2 and 4.
"""


class DynamapError(Exception):
    """Base class for all package-specific errors."""


class DomainError(DynamapError, ValueError):
    """Invalid argument or parameter outside its admissible domain."""


class DimensionMismatchError(DomainError):
    """Operands with incompatible shapes or Hilbert-space dimensions."""


class NotHermitianError(DomainError):
    """Matrix (or Choi matrix) fails the Hermiticity tolerance."""


class InvalidStateError(DomainError):
    """Matrix is not a valid density operator."""


class NotProjectorError(DomainError):
    """Superoperator does not satisfy S @ S == S within tolerance."""


class ProfileError(DomainError):
    """Decay profile violates its constraints (initial value, bounds)."""


class UnsupportedChannelError(DomainError):
    """Operation defined only for the completely depolarizing channel."""


class GridError(DomainError):
    """Time grid does not meet a solver's requirements."""


class NumericalError(DynamapError):
    """Numerical procedure failed; results would be unreliable."""


class SingularMatrixError(NumericalError):
    """Matrix is singular to working precision (pivot underflow)."""


class ConvergenceError(NumericalError):
    """Iterative eigensolver did not converge."""


class StepSizeError(NumericalError):
    """ODE step rejected: local error estimate above the tolerance."""

"""Exception hierarchy shared by all modules."""


class MathieuGaussianError(Exception):
    pass


class PrecisionError(MathieuGaussianError, ValueError):
    """Requested working precision is below the supported floor."""


class DomainError(MathieuGaussianError, ValueError):
    """Arguments outside the region where an operation is defined."""


class ConvergenceError(MathieuGaussianError, ArithmeticError):
    """A sum or quadrature failed to reach the requested accuracy."""


class VerificationError(MathieuGaussianError, AssertionError):
    """Two independent routes to the same quantity disagree."""

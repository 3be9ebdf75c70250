"""High-precision evaluation of the Mathieu-Gaussian series

    S_{mu,gamma}(a; lam) = sum_{n>=1} n^gamma exp(-lam n^2/a^2) / (n^2+a^2)^mu

by direct summation and by its large-a expansions.
"""

from .arith import PrecisionContext, ctx_new, in_sector
from .errors import ConvergenceError, DomainError, MathieuGaussianError, PrecisionError, VerificationError
from .oracle import EvalReport, SeriesParams, alternating_sum, appendixA_G, direct_sum, mellin_H

__version__ = "0.1.0"

__all__ = [
    "PrecisionContext",
    "ctx_new",
    "in_sector",
    "SeriesParams",
    "EvalReport",
    "direct_sum",
    "alternating_sum",
    "mellin_H",
    "appendixA_G",
    "MathieuGaussianError",
    "PrecisionError",
    "DomainError",
    "ConvergenceError",
    "VerificationError",
]
